"""
Command-line surface: config parsing, subcommands and reports.
"""

from .config_parser import ModelConfig, parse_config_text, parse_model_config
from .models import ClassifyResult, GibbsResult, OracleResult, SampleBatch
from .report import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, emit_report, format_value
from .commands import COMMANDS, run_command

__all__ = [
    "ModelConfig",
    "parse_config_text",
    "parse_model_config",
    "ClassifyResult",
    "GibbsResult",
    "OracleResult",
    "SampleBatch",
    "EXIT_ERROR",
    "EXIT_NEGATIVE",
    "EXIT_OK",
    "emit_report",
    "format_value",
    "COMMANDS",
    "run_command",
]
