"""Synthetic desk fixtures: a catalog of N distinct APIs plus an organization
lexicon with abbreviations.

Used by the test suite, the benchmark and the demo data generator. The
vocabulary is constructed so that every API's name carries a unique
(sector, subject) word pair disjoint from organization names, paraphrase
wording, enum values and the vague-query templates; that makes keyword
routing over the generated queries unambiguous and the end-to-end oracle
exact.
"""

from __future__ import annotations

from .catalog import ApiCatalog, ApiSpec, ArgSpec

SECTORS = (
    "domestic",
    "overseas",
    "industrial",
    "retail",
    "municipal",
    "maritime",
    "agricultural",
    "pharmaceutical",
    "automotive",
    "aerospace",
    "textile",
    "mining",
)

SUBJECTS = ("revenue", "liability", "subsidy", "litigation", "patent")

SUFFIXES = ("figures", "metrics", "profile", "history", "summary")

PERIOD_VALUES = ("annual", "quarterly", "monthly")

ORG_FIRST = (
    "Kestrel",
    "Vireo",
    "Bluefin",
    "Copperline",
    "Nordwind",
    "Solace",
    "Tangent",
    "Umber",
    "Walnut",
    "Yarrow",
)

ORG_SECOND = ("Dynamics", "Holdings", "Partners", "Group", "Mills", "Freight")

VAGUE_QUERIES = (
    "Tell me some information",
    "Give me everything you know",
    "What can you do",
    "I have a question",
    "Help me please",
    "Show me something interesting",
)


def make_synthetic_catalog(n_apis: int = 60, enum_every: int = 3) -> ApiCatalog:
    """n_apis distinct APIs; every enum_every-th one also takes a required
    reporting-period enum."""
    if n_apis > len(SECTORS) * len(SUBJECTS):
        raise ValueError(f"at most {len(SECTORS) * len(SUBJECTS)} synthetic APIs supported")
    apis = []
    for i in range(n_apis):
        sector = SECTORS[i // len(SUBJECTS)]
        subject = SUBJECTS[i % len(SUBJECTS)]
        suffix = SUFFIXES[i % len(SUFFIXES)]
        inputs = [
            ArgSpec("company_name", "text", "organization name", required=True),
            ArgSpec("year", "integer", "fiscal year", required=True),
        ]
        if enum_every and i % enum_every == 0:
            inputs.append(
                ArgSpec(
                    "period",
                    "enum",
                    "reporting period",
                    required=True,
                    enum_values=PERIOD_VALUES,
                )
            )
        outputs = [
            ArgSpec(f"total_{sector}_{subject}", "decimal", f"total {sector} {subject}"),
            ArgSpec(f"{sector}_{subject}_growth", "decimal", f"{sector} {subject} growth"),
        ]
        apis.append(
            ApiSpec(
                api_id=f"API{i + 1:03d}",
                display_name=f"{sector} {subject} {suffix}",
                description=f"Look up {sector} {subject} data for an organization.",
                inputs=tuple(inputs),
                outputs=tuple(outputs),
            )
        )
    return ApiCatalog(apis=tuple(apis), version="synthetic-1")


def make_companies(n: int = 30) -> list[str]:
    if n > len(ORG_FIRST) * len(ORG_SECOND):
        raise ValueError(f"at most {len(ORG_FIRST) * len(ORG_SECOND)} companies supported")
    return [
        f"{ORG_FIRST[i % len(ORG_FIRST)]} {ORG_SECOND[i // len(ORG_FIRST)]}" for i in range(n)
    ]


def make_company_aliases(companies) -> dict[str, str]:
    """Abbreviation -> canonical name, e.g. "KD" -> "Kestrel Dynamics"."""
    aliases = {}
    for name in companies:
        parts = name.split()
        abbr = "".join(p[0] for p in parts).upper()
        if abbr not in aliases:
            aliases[abbr] = name
    return aliases


def make_api_abbreviations(catalog: ApiCatalog, api_ids) -> dict[str, str]:
    """Learned shorthand for the given APIs, deliberately absent from the
    catalog text: initials of the display name plus an X (e.g. "DRFX").
    Skips entries whose initials collide with an earlier one, so every
    abbreviation is unambiguous."""
    out: dict[str, str] = {}
    for api_id in api_ids:
        api = catalog.get(api_id)
        abbr = "".join(w[0] for w in api.display_name.split()).upper() + "X"
        if abbr not in out:
            out[abbr] = api.api_id
    return out
