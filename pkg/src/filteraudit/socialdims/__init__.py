"""Per-page annotators: topics, individual vs organization, roles, geography."""

from .geo import Gazetteer, GeoLabel, load_gazetteer, load_regions, map_region, tag_geography
from .indorg import (
    IndOrgDecision,
    IndOrgFeatures,
    IndOrgModel,
    classify_ind_org,
    compute_ind_org_features,
    person_entity_proxy,
    train_ind_org,
    training_label,
)
from .profile import SocialProfile, build_profile, build_profiles, read_profiles, write_profiles
from .roles import RoleSet, extract_roles, load_onet_lexicon, load_role_lexicon, map_occupations
from .topics import TfidfVectorizer, TopicModel, fit_topics

__all__ = [
    "Gazetteer",
    "GeoLabel",
    "IndOrgDecision",
    "IndOrgFeatures",
    "IndOrgModel",
    "RoleSet",
    "SocialProfile",
    "TfidfVectorizer",
    "TopicModel",
    "build_profile",
    "build_profiles",
    "classify_ind_org",
    "compute_ind_org_features",
    "extract_roles",
    "fit_topics",
    "load_gazetteer",
    "load_onet_lexicon",
    "load_regions",
    "load_role_lexicon",
    "map_occupations",
    "map_region",
    "person_entity_proxy",
    "read_profiles",
    "tag_geography",
    "train_ind_org",
    "training_label",
    "write_profiles",
]
