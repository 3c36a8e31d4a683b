import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ffcircle",
    deadline=None,
    derandomize=True,
    max_examples=int(os.environ.get("FFCIRCLE_HYPOTHESIS_EXAMPLES", 60)),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ffcircle")
