"""Built-in feature presets.

These mirror the catalog a classroom session starts from: the dear/bless word
list, the "Re" string pattern, and the five switches of the model-picker app
(all caps, dollar sign, multiple punctuation, Dear/Mister, religious words).
"""

from __future__ import annotations

from .textfeat import (
    AllCaps,
    CapsMajority,
    ContainsDollar,
    FeatureDef,
    MultiPunct,
    Substring,
    WordList,
)

PRESETS: dict[str, FeatureDef] = {
    d.name: d
    for d in [
        WordList("dear_or_bless", frozenset({"dear", "bless", "almighty", "urgent"})),
        Substring("contains_re", "Re", case_sensitive=True),
        AllCaps("all_caps"),
        ContainsDollar("dollar"),
        MultiPunct("multi_punct", min_count=2),
        WordList("dear_or_mister", frozenset({"dear", "mister"})),
        WordList("religious", frozenset({"bless", "blessed", "almighty", "pray", "god", "faith"})),
        CapsMajority("caps_ratio_gt_half"),
    ]
}

# The five features offered by the interactive app, in its display order.
SHINY_PRESET_NAMES = ("all_caps", "dollar", "multi_punct", "dear_or_mister", "religious")


def preset(name: str) -> FeatureDef:
    return PRESETS[name]


def preset_list(names=None) -> list[FeatureDef]:
    if names is None:
        return list(PRESETS.values())
    return [PRESETS[n] for n in names]


def shiny_presets() -> list[FeatureDef]:
    return preset_list(SHINY_PRESET_NAMES)
