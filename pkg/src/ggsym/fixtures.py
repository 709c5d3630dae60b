"""Bundled example datasets and model files.

Provenance:

- ``frets.csv``: head length and breadth of the first and second adult
  sons in 25 families, measured by Frets (Genetica, 1921); transcribed
  from the form reproduced in Mardia, Kent & Bibby, "Multivariate
  Analysis" (1979).  Columns B1, B2 (breadths) and L1, L2 (lengths).
  Transcription check: column means are (151.12, 149.24, 185.72,
  183.84), matching the published values exactly.
- ``marks.csv``: examination marks of 88 students in five mathematics
  subjects, from Mardia, Kent & Bibby (1979), Table 1.2.1.  Columns
  me (mechanics), ve (vectors), al (algebra), an (analysis),
  st (statistics).  Transcription check: column means are (38.95, 50.59,
  50.60, 46.68, 42.31), matching the published values to rounding.

The accompanying ``.model`` files carry the conditional-independence
graphs found to fit these data well, together with the permutation
symmetry between sons (``frets``) and between open/closed-book subject
pairs (``marks``).
"""

from importlib import resources

from .estimation import Dataset
from .modelfile import ModelSpec, load_model


def fixture_path(name: str):
    """Filesystem path of a bundled data or model file."""
    return resources.files("ggsym") / "data" / name


def _load_csv(name: str) -> Dataset:
    from .cli import load_dataset

    return load_dataset(fixture_path(name))


def frets_heads() -> Dataset:
    return _load_csv("frets.csv")


def mathematics_marks() -> Dataset:
    return _load_csv("marks.csv")


def frets_model() -> ModelSpec:
    return load_model(fixture_path("frets.model"))


def marks_model() -> ModelSpec:
    return load_model(fixture_path("marks.model"))
