import os
import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).resolve().parent))

settings.register_profile("hwtheta", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("quick", parent=settings.get_profile("hwtheta"), max_examples=20)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "hwtheta"))
