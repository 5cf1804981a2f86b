"""Assemble one SocialProfile per hostname from the per-page annotators."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from ..ingest import HostRecord
from .geo import Gazetteer, tag_geography
from .indorg import IndOrgModel, classify_ind_org, compute_ind_org_features
from .roles import extract_roles, map_occupations
from .topics import TopicModel


@dataclass(frozen=True)
class SocialProfile:
    """Extracted dimensions of one website's self-description page."""

    hostname: str
    topic: Optional[int]
    ind_org: Optional[str]
    confidence: Optional[float]
    roles: Tuple[str, ...]
    occupations: Tuple[str, ...]
    country: Optional[str]
    subregion: Optional[str]
    region: Optional[str]


def build_profile(
    record: HostRecord,
    topic_model: Optional[TopicModel] = None,
    indorg_model: Optional[IndOrgModel] = None,
    gazetteer: Optional[Gazetteer] = None,
) -> SocialProfile:
    page = record.about_page
    topic = None
    if topic_model is not None:
        topic = int(topic_model.assign([page])[0])
    ind_org = confidence = None
    if indorg_model is not None:
        decision = classify_ind_org(compute_ind_org_features(page.text), indorg_model)
        ind_org, confidence = decision.label, decision.confidence
    role_set = map_occupations(extract_roles(page))
    roles = []
    for surface, _ in role_set.roles:
        if surface not in roles:
            roles.append(surface)
    occupations = [occ for occ, _ in role_set.occupations]
    geo = tag_geography(page, gazetteer)
    return SocialProfile(
        hostname=record.hostname,
        topic=topic,
        ind_org=ind_org,
        confidence=confidence,
        roles=tuple(roles),
        occupations=tuple(occupations),
        country=geo.country,
        subregion=geo.subregion,
        region=geo.region,
    )


def build_profiles(
    records: Iterable[HostRecord],
    topic_model: Optional[TopicModel] = None,
    indorg_model: Optional[IndOrgModel] = None,
    gazetteer: Optional[Gazetteer] = None,
) -> List[SocialProfile]:
    """One profile per host, sorted by hostname for stable output."""
    profiles = [
        build_profile(r, topic_model, indorg_model, gazetteer) for r in records
    ]
    profiles.sort(key=lambda p: p.hostname)
    return profiles


def write_profiles(path, profiles: Iterable[SocialProfile]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in profiles:
            row = {
                "hostname": p.hostname,
                "topic": p.topic,
                "ind_org": p.ind_org,
                "confidence": p.confidence,
                "roles": list(p.roles),
                "occupations": list(p.occupations),
                "country": p.country,
                "subregion": p.subregion,
                "region": p.region,
            }
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def read_profiles(path) -> List[SocialProfile]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            out.append(
                SocialProfile(
                    hostname=row["hostname"],
                    topic=row["topic"],
                    ind_org=row["ind_org"],
                    confidence=row["confidence"],
                    roles=tuple(row["roles"]),
                    occupations=tuple(row["occupations"]),
                    country=row["country"],
                    subregion=row["subregion"],
                    region=row["region"],
                )
            )
    return out
