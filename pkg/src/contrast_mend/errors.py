"""Exception hierarchy.

Every per-issue failure in the repair pipeline is one of these classes; the
class name doubles as the machine-readable ``reason`` written to the patch
report for unrepaired issues.
"""


class ContrastMendError(Exception):
    """Base class for all library errors."""

    @property
    def reason(self) -> str:
        return type(self).__name__


# harmony
class EmptyPage(ContrastMendError):
    pass


class EmptyHistogram(ContrastMendError):
    pass


# reference db
class Monochrome(ContrastMendError):
    pass


class InconsistentDb(ContrastMendError):
    pass


# reports and dumps
class MalformedReport(ContrastMendError):
    pass


class MalformedDump(ContrastMendError):
    pass


# selection
class Unsatisfiable(ContrastMendError):
    def __init__(self, message: str, trail: list[str] | None = None):
        super().__init__(message)
        self.trail = list(trail or [])


class BothAbsent(ContrastMendError):
    pass


# localization
class NotFound(ContrastMendError):
    pass


class NoDumpNode(ContrastMendError):
    pass


class NoText(ContrastMendError):
    pass


class Ambiguous(ContrastMendError):
    pass


class NoRepairableAttribute(ContrastMendError):
    pass


class DanglingReference(ContrastMendError):
    pass


class CycleDetected(ContrastMendError):
    pass


# images
class NoForegroundPixels(ContrastMendError):
    pass


class NoMatchingPaint(ContrastMendError):
    pass


class DrawableNotFound(ContrastMendError):
    pass


class OrnamentalImage(ContrastMendError):
    pass


# patching
class StalePatch(ContrastMendError):
    pass


class ConflictingSharedTarget(ContrastMendError):
    pass
