from .summary import format_table, generate_report, summarize_fits

__all__ = [
    "generate_report",
    "summarize_fits",
    "format_table",
]
