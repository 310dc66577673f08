import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", 200)), suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")
