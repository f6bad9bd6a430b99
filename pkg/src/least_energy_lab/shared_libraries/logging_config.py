"""
Logging setup for solver runs and the experiment harness.

Production runs emit one JSON object per record so sweep logs can be filtered by
(λ, p) cell; development runs print plain text lines.
"""
import logging
import sys
import json
import os
from datetime import datetime, timezone
from typing import Dict, Any, Optional

# Context fields copied from a record into the JSON payload when present
CONTEXT_FIELDS = (
    'event', 'p', 'lam', 'stage', 'check', 'cell', 'iterations', 'residual',
    'duration_seconds', 'status', 'error_type', 'error_message',
)


class JSONFormatter(logging.Formatter):
    """Render a record as a single JSON line, carrying the known context fields."""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
        }

        if record.exc_info:
            log_data['exception'] = self.formatException(record.exc_info)

        for field in CONTEXT_FIELDS:
            if hasattr(record, field):
                log_data[field] = getattr(record, field)

        return json.dumps(log_data, default=str)


def configure_logging(
    level: Optional[str] = None,
    format_type: Optional[str] = None,
    output: str = 'stderr'
) -> None:
    """
    Install one stream handler on the root logger.

    Without arguments the level is DEBUG and the format text, except under
    ENVIRONMENT=production where they become INFO and json. `output` picks
    stdout or stderr.
    """
    environment = os.getenv('ENVIRONMENT', 'development')

    if level is None:
        level = 'INFO' if environment == 'production' else 'DEBUG'

    if format_type is None:
        format_type = 'json' if environment == 'production' else 'text'

    numeric_level = getattr(logging, level.upper(), logging.INFO)

    if format_type == 'json':
        formatter = JSONFormatter()
    else:
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    root_logger.handlers.clear()

    handler = logging.StreamHandler(sys.stdout if output == 'stdout' else sys.stderr)
    handler.setFormatter(formatter)
    root_logger.addHandler(handler)

    logging.getLogger(__name__).debug(
        f"Logging configured: level={level}, format={format_type}, environment={environment}"
    )


class StructuredLogger:
    """Wraps a logger with one method per solver or harness event."""

    def __init__(self, logger: logging.Logger):
        self.logger = logger

    def log_with_context(
        self,
        level: int,
        message: str,
        context: Optional[Dict[str, Any]] = None
    ) -> None:
        self.logger.log(level, message, extra=context or {})

    def log_solve_started(self, p: float, lam: float, dofs: int, stage: str = 'minimize') -> None:
        """Log the start of one (λ, p) solve."""
        context = {'p': p, 'lam': lam, 'stage': stage, 'event': 'solve_started'}
        self.log_with_context(
            logging.INFO, f"Solve started: p={p:g}, lambda={lam:g}, {dofs} unknowns", context
        )

    def log_solve_completed(
        self,
        p: float,
        lam: float,
        iterations: int,
        residual: float,
        duration_seconds: float
    ) -> None:
        """Log solve completion with convergence metrics."""
        context = {
            'p': p,
            'lam': lam,
            'iterations': iterations,
            'residual': residual,
            'duration_seconds': duration_seconds,
            'event': 'solve_completed'
        }
        self.log_with_context(
            logging.INFO,
            f"Solve completed: p={p:g}, lambda={lam:g}, {iterations} iterations, "
            f"residual {residual:.2e} in {duration_seconds:.2f}s",
            context
        )

    def log_stage_failed(self, stage: str, error: Exception, **kwargs) -> None:
        """Log a failed pipeline stage; the run continues with independent work."""
        context = dict(kwargs)
        context.update({
            'stage': stage,
            'event': 'stage_failed',
            'error_type': type(error).__name__,
            'error_message': str(error),
        })
        self.log_with_context(logging.WARNING, f"Stage {stage} failed: {error}", context)

    def log_check_result(
        self, check: str, status: str, measured: Any = None, cell: str = None
    ) -> None:
        """Log a claim verdict."""
        context = {'check': check, 'status': status, 'event': 'check_result'}
        if cell:
            context['cell'] = cell
        message = f"Check {check}: {status}"
        if measured is not None:
            message += f" (measured {measured})"
        self.log_with_context(logging.INFO, message, context)

    def log_error(
        self,
        message: str,
        error: Exception = None,
        **kwargs
    ) -> None:
        """Log at ERROR, attaching the exception type, message and traceback."""
        context = dict(kwargs)
        if error is not None:
            context['error_type'] = type(error).__name__
            context['error_message'] = str(error)

        self.logger.error(message, exc_info=error, extra=context)
