#!/usr/bin/env python3
"""Rebuild the bundled mini corpus and its companion training sets.

The JSONL files under src/filteraudit/data/mini/ are checked in so the
demo pipeline and the golden-run test work offline. This script is how
they were produced; it is fully seeded, so running it again rewrites
byte-identical files.

Layout: 80 hostnames, one about page each, plus 120 additional pages
for a total of exactly 200 documents. Hosts cycle through different
roles, cities, and writing quality so every filter produces a spread of
scores: short pages fail the word-count rule, listy pages fail the
bullet rule, spam pages repeat themselves and drift out of vocabulary.
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "filteraudit" / "data" / "mini"

ROLES = [
    "potter", "teacher", "photographer", "writer", "musician",
    "painter", "baker", "designer", "illustrator", "journalist",
    "developer", "engineer", "consultant", "coach", "artist",
]

CITIES = [
    "London", "Manchester", "Paris", "Berlin", "Madrid", "Rome",
    "Warsaw", "Moscow", "Istanbul", "New York", "Chicago", "Toronto",
    "Mexico City", "Buenos Aires", "Tokyo", "Seoul", "Beijing",
    "Mumbai", "Singapore", "Dubai", "Sydney", "Auckland", "Cairo",
    "Nairobi", "Lagos", "Cape Town",
]

CLEAN = [
    "The workshop sits at the end of a quiet street near the old market.",
    "Most mornings start with a pot of coffee and a list of small repairs.",
    "Commissions usually arrive by word of mouth rather than advertising.",
    "Each piece is finished by hand and signed on the underside.",
    "The kiln runs twice a week when the weather allows it.",
    "Students come in on Tuesdays for an open studio session.",
    "The first years were slow, but the practice has grown steadily.",
    "A good tool lasts decades if you clean it after every use.",
    "Sketches pile up in notebooks long before anything gets made.",
    "The shelves along the back wall hold tests and happy accidents.",
    "Clients often ask for repairs of pieces their parents bought.",
    "There is a long waiting list for the autumn evening classes.",
    "Suppliers changed over the years, but the clay body stayed the same.",
    "The website is updated whenever a new batch leaves the studio.",
    "Prices include packing, and shipping is arranged per order.",
    "Local galleries show a rotating selection of recent work.",
    "The studio cat has opinions about almost every delivery.",
    "Weekend markets remain the best place to meet returning customers.",
    "Most of the glazes are mixed from raw materials in small buckets.",
    "An old ledger records every firing since the very first one.",
    "Visitors are welcome by appointment on Friday afternoons.",
    "The newsletter goes out four times a year, never more.",
    "Collaboration with other makers keeps the work honest.",
    "Every project begins with a conversation about use and place.",
    "Photographs rarely do justice to the surface of a finished glaze.",
    "The bench by the window is reserved for detail work.",
    "Offcuts and seconds are sold at a discount each spring.",
    "Teaching changed how the work itself gets planned and made.",
    "A small grant paid for the second wheel and better lighting.",
    "Deliveries go out on Thursdays packed in recycled cardboard.",
    "The quiet season is for experiments that may never be repeated.",
    "Notes from each firing feed back into the next batch.",
    "The neighbourhood has changed, but the landlord kept the rent fair.",
    "Apprentices stay for a season and leave with a full toolkit.",
    "Nothing leaves the studio before a second look in daylight.",
    "The answer to most problems is patience and a sharper pencil.",
]

SPAM_LINES = [
    "BEST deals best deals best deals click now click now click now",
    "buy cheap buy cheap buy cheap limited offer limited offer",
    "winner winner winner claim prize claim prize claim prize now",
    "free free free shipping today only today only today only",
    "top rated top rated top rated five stars five stars five stars",
]

LIST_ITEMS = [
    "beginner wheel throwing, six weeks",
    "glaze chemistry, weekend intensive",
    "portrait lighting, one day",
    "bread and pastry basics, four weeks",
    "field recording walk, one evening",
    "bookbinding for beginners, two days",
    "colour theory refresher, one day",
    "studio safety induction, two hours",
]

SYLLABLES = [
    "ka", "ri", "mo", "ta", "ne", "so", "lu", "pi", "va", "de",
    "ši", "ló", "mu", "tē", "za", "ko", "re", "ni", "fa", "ju",
]


def sentences(rng, low, high):
    count = rng.randint(low, high)
    return " ".join(rng.choice(CLEAN) for _ in range(count))


def spam_text(rng):
    lines = [rng.choice(SPAM_LINES) for _ in range(rng.randint(4, 7))]
    lines.append(f"call {rng.randint(100, 999)}-{rng.randint(1000, 9999)} now now now")
    block = "\n".join(lines)
    return block + "\n" + block


def xx_sentence(rng):
    words = []
    for _ in range(rng.randint(6, 12)):
        words.append("".join(rng.choice(SYLLABLES) for _ in range(rng.randint(2, 4))))
    return " ".join(words).capitalize() + "."


def xx_text(rng, low, high):
    return " ".join(xx_sentence(rng) for _ in range(rng.randint(low, high)))


def build_corpus(rng):
    rows = []
    serial = 0

    def add(url, text):
        nonlocal serial
        rows.append({"id": f"d{serial:04d}", "url": url, "text": text})
        serial += 1

    for i in range(80):
        role = ROLES[i % len(ROLES)]
        city = CITIES[i % len(CITIES)]
        host = f"{role}{i:02d}.example.{('com', 'org', 'net')[i % 3]}"
        tier = ("good", "good", "plain", "short", "good", "spam", "plain", "good")[i % 8]

        if i % 5 == 0:
            intro = (
                f"We are a small studio of makers working in {city}. "
                f"Our founder is a {role} and teacher who opened the space in "
                f"{1998 + i % 20}."
            )
        else:
            intro = (
                f"I am a {role} and teacher based in {city}. "
                f"This site collects my work, classes, and occasional notes."
            )

        if tier == "good":
            about = f"{intro} {sentences(rng, 4, 6)}\n\n{sentences(rng, 3, 5)}"
        elif tier == "plain":
            about = f"{intro} {sentences(rng, 2, 3)}"
        elif tier == "short":
            about = intro
        else:
            about = f"{intro}\n{spam_text(rng)}"
        add(f"https://{host}/about", about)

        extras = 2 if i < 40 else 1
        for k in range(extras):
            kind = (i * 2 + k) % 5
            if kind == 0:
                text = f"Workshop notes, week {i + k}. {sentences(rng, 3, 7)}"
            elif kind == 1:
                items = rng.sample(LIST_ITEMS, 5)
                text = "Upcoming classes:\n" + "\n".join(f"- {it}" for it in items)
            elif kind == 2:
                prices = " ".join(
                    f"item {n}: {rng.randint(5, 90)}.{rng.randint(0, 99):02d}"
                    for n in range(1, 14)
                )
                text = f"Price list {2020 + k}. {prices}"
            elif kind == 3:
                para = sentences(rng, 2, 3)
                text = "\n".join([para] * 4)
            else:
                text = sentences(rng, 1, 2)
            slug = ("journal", "classes", "prices", "archive", "news")[kind]
            add(f"https://{host}/{slug}/{k}", text)

    assert len(rows) == 200, len(rows)
    return rows


def build_training_sets(rng):
    kn = [
        {"id": f"kn{i:04d}", "url": "https://ref.example.org/text", "text": sentences(rng, 3, 6)}
        for i in range(120)
    ]
    pos = [
        {"id": f"pos{i:03d}", "url": "https://ref.example.org/good", "text": sentences(rng, 4, 7)}
        for i in range(60)
    ]
    neg = [
        {"id": f"neg{i:03d}", "url": "https://ref.example.org/bad", "text": spam_text(rng)}
        for i in range(60)
    ]
    en = [
        {"id": f"en{i:03d}", "url": "https://ref.example.org/en", "text": sentences(rng, 2, 4)}
        for i in range(40)
    ]
    xx = [
        {"id": f"xx{i:03d}", "url": "https://ref.example.org/xx", "text": xx_text(rng, 2, 4)}
        for i in range(40)
    ]
    return {
        "kn_train.jsonl": kn,
        "quality_pos.jsonl": pos,
        "quality_neg.jsonl": neg,
        "langid_en.jsonl": en,
        "langid_xx.jsonl": xx,
    }


def main():
    rng = random.Random(20240901)
    OUT.mkdir(parents=True, exist_ok=True)
    files = {"mini.jsonl": build_corpus(rng)}
    files.update(build_training_sets(rng))
    for name, rows in files.items():
        path = OUT / name
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        print(f"wrote {len(rows):4d} rows -> {path}")


if __name__ == "__main__":
    main()
