"""Run configurations, result bundles, CSV/JSON output and SVG figures."""
from .bundle import ResultBundle, bundle_from_json, bundle_to_json, run, write_outputs
from .config import RunConfig, load_config, validate_config
from .figures import FIGURES, emit_figures

__all__ = [
    "FIGURES", "ResultBundle", "RunConfig", "bundle_from_json", "bundle_to_json", "emit_figures",
    "load_config", "run", "validate_config", "write_outputs",
]
