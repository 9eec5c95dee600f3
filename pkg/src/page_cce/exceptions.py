"""
Custom exceptions for the page_cce library.
"""
from typing import Optional, Sequence


class PageError(Exception):
    """Base exception for all page_cce errors."""
    pass


class ConfigurationError(PageError):
    """Raised when configuration is invalid."""
    pass


class ShapeError(PageError):
    """Raised when tensor shapes do not agree for an operation."""

    def __init__(self, op: str, left: Sequence[int], right: Sequence[int], message: str = ""):
        self.op = op
        self.left = tuple(left)
        self.right = tuple(right)
        detail = f": {message}" if message else ""
        super().__init__(f"{op}: incompatible shapes {self.left} and {self.right}{detail}")


class GradientError(PageError):
    """Raised when backward or an optimizer step is used out of order."""
    pass


class CorpusError(PageError):
    """Raised when a corpus file or conversation is malformed."""

    def __init__(
        self,
        message: str,
        conversation_id: Optional[str] = None,
        cause: Optional[Exception] = None,
    ):
        self.conversation_id = conversation_id
        self.cause = cause
        prefix = f"Conversation '{conversation_id}': " if conversation_id is not None else ""
        super().__init__(f"{prefix}{message}")


class EncodingError(PageError):
    """Raised when an utterance cannot be encoded."""
    pass


class GraphError(PageError):
    """Raised when a conversation graph is inconsistent with its inputs or weights."""
    pass


class CheckpointError(PageError):
    """Raised when a checkpoint cannot be read or does not match the configuration."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message)


class MetricsError(PageError):
    """Raised when metrics are requested on invalid input."""
    pass


class TrainingDivergedError(PageError):
    """Raised when the training loss stops being finite."""

    def __init__(self, epoch: int, batch_index: int, loss: float, conversation_ids: Sequence[str] = ()):
        self.epoch = epoch
        self.batch_index = batch_index
        self.loss = loss
        self.conversation_ids = list(conversation_ids)
        super().__init__(
            f"Training diverged at epoch {epoch}, batch {batch_index}: loss={loss} "
            f"(conversations: {', '.join(self.conversation_ids) or 'n/a'})"
        )
