"""Error hierarchy shared by the estimators, discovery, graph and CLI layers."""


class CentropyError(Exception):
    """Base class for every error raised by centropy."""


# Estimators

class EstimatorError(CentropyError):
    """An estimator could not produce a value for its inputs."""


class NonFiniteInput(EstimatorError):
    pass


class SingularCovariance(EstimatorError):
    pass


class NeighborCountTooLarge(EstimatorError):
    pass


class NonCountData(EstimatorError):
    pass


class RowMisalignment(EstimatorError):
    pass


# Configuration and discovery

class InvalidConfig(CentropyError, ValueError):
    pass


class SeriesTooShort(CentropyError):
    pass


class DiscoveryError(CentropyError):
    """An estimator failure annotated with the target and candidate being tested."""

    def __init__(self, error, target, candidate=None, node_names=None):
        self.error = error
        self.target = target
        self.candidate = candidate
        target_name = node_names[target] if node_names else f"X{target}"
        where = f"target {target_name}"
        if candidate is not None:
            source = node_names[candidate.variable] if node_names else f"X{candidate.variable}"
            where += f", candidate {source} at lag {candidate.lag}"
        super().__init__(f"{where}: {type(error).__name__}: {error}")


# Graphs

class GraphError(CentropyError):
    pass


class SchemaError(GraphError):
    """Graph JSON does not match the schema; ``path`` locates the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class DuplicateEdgeTriple(GraphError):
    pass


class NodeCountMismatch(GraphError):
    pass


# Files

class MalformedInput(CentropyError):
    """A time-series CSV could not be parsed; row and column are 1-based."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
