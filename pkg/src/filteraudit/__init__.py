"""Filter scoring and audit toolkit for web-scale pretraining corpora.

The package covers the full loop: pull self-description pages out of a raw
corpus, score pages with quality and language-identification filters, tag
pages with social dimensions (topic, individual vs organization, roles and
occupations, geography), and audit which groups a filtering policy keeps or
removes.
"""
from filteraudit.text import Document, tokenize

__version__ = "0.1.0"

__all__ = ["Document", "tokenize", "__version__"]
