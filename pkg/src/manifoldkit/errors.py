"""Exception hierarchy.

Three families, mapped to CLI exit codes: configuration problems (1),
input/data problems (2), numerical failures (3).
"""


class ManifoldKitError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ConfigError(ManifoldKitError):
    """Invalid configuration: bad algorithm name, missing required field."""

    exit_code = 1


class DataError(ManifoldKitError):
    """Invalid or unreadable input data."""

    exit_code = 2


class NumericalError(ManifoldKitError):
    """Numerical failure during computation."""

    exit_code = 3


# -- data / input errors ------------------------------------------------

class InputIoError(DataError):
    """File missing or unreadable."""


class FormatError(DataError):
    """Malformed file contents: ragged rows, non-numeric cells, NaN."""


class EmptyInput(DataError):
    """A file or matrix with zero rows."""


class DuplicateKey(DataError):
    """Two rows share a sample id."""


class MissingColumn(DataError):
    """A required column is absent from the header."""


class UnknownLabel(DataError):
    """A category-merge mapping names a label not present in the column."""


class EmptyIntersection(DataError):
    """Embedding ids and annotation ids share no common sample."""


class IdMismatch(DataError):
    """Embedding ids are not a subset of dataset ids."""


class InvalidSpec(DataError):
    """Synthetic-dataset spec is malformed."""


class ShapeMismatch(DataError):
    """Two point sets that must share a shape do not."""


# -- parameter / precondition errors ------------------------------------

class KTooLarge(ConfigError):
    """Neighbor count k exceeds what the data supports."""


class NonPositiveSigma(ConfigError):
    """Gaussian kernel bandwidth must be positive."""


# -- numerical errors ----------------------------------------------------

class ZeroNormRow(NumericalError):
    """Cosine distance undefined for an all-zero row."""


class ZeroBandwidth(NumericalError):
    """Duplicate points make an adaptive kernel bandwidth zero."""


class NonSymmetric(NumericalError):
    """Matrix fails the symmetry tolerance of a symmetric-only routine."""


class ConvergenceFailure(NumericalError):
    """An iterative solver did not converge."""


class DisconnectedGraph(NumericalError):
    """The neighborhood graph has more than one connected component."""

    def __init__(self, component_sizes):
        self.component_sizes = list(component_sizes)
        sizes = ",".join(str(s) for s in self.component_sizes)
        super().__init__(f"DisconnectedGraph components={sizes}")


class ZeroDegreeNode(NumericalError):
    """A graph node has zero total affinity."""


class ZeroRowSum(NumericalError):
    """An affinity row sums to zero; row normalization impossible."""


class SingularLocalGram(NumericalError):
    """Unregularized local Gram matrix is singular."""


class CalibrationFailure(NumericalError):
    """Perplexity bisection exhausted its budget without converging."""


class NumericalOverflow(NumericalError):
    """Non-finite values appeared mid-optimization (divergent step size)."""


class DegenerateSpectrum(NumericalError):
    """All diffusion eigenvalues beyond the first vanish."""


class SingleClass(DataError):
    """A metric that needs at least two classes saw only one."""
