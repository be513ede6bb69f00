"""Pipeline error types.

Construction/validation mistakes raise plain ``ValueError``; these classes
cover failures that can only be detected while processing a capture.
"""


class PipelineError(RuntimeError):
    """A simulation pipeline stage failed on otherwise valid inputs."""


class ToneAbsentError(PipelineError):
    """The reference-tone band of a capture carries no energy."""


class CarrierLostError(PipelineError):
    """The carrier amplitude estimate is too small to normalize by."""
