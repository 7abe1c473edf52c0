"""Per-criterion outcomes collected by the acceptance tests, printed at session end."""

RESULTS: dict[int, tuple[bool, float, str]] = {}
