"""zsfuse-bridge: frozen-encoder embedding exports for the zsfuse engine."""

from .export import (ExportJob, export_alm_audio, export_alm_text,
                     export_fm_features, run_job)
from .zsem import ExportError, write_zsem

__version__ = "0.1.0"
