"""Law checks, instance generation and the native oracle."""
from .checks import CATALOG, CHECK_IDS, CheckResult, run_check, run_suite
from .generate import Instance, InstanceGenerator, curated_instances, generate_instances
from .mutants import MUTANTS
from .oracle import native_coproduct_oracle

__all__ = [
    "CATALOG", "CHECK_IDS", "CheckResult", "run_check", "run_suite",
    "Instance", "InstanceGenerator", "curated_instances", "generate_instances",
    "MUTANTS", "native_coproduct_oracle",
]
