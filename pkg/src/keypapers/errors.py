"""Exception hierarchy shared by every stage of the pipeline."""


class KeyPapersError(Exception):
    """Base class; the CLI maps any subclass to a nonzero exit."""

    module = "keypapers"

    def __str__(self) -> str:
        return f"[{self.module}] {super().__str__()}"


class CorpusError(KeyPapersError):
    module = "corpus"


class EmptyCorpusError(CorpusError):
    pass


class DuplicateIdError(CorpusError):
    def __init__(self, paper_id: str):
        super().__init__(f"duplicate paper id {paper_id!r}")
        self.paper_id = paper_id


class GraphError(KeyPapersError):
    module = "graph"


class ClusteringError(KeyPapersError):
    module = "clustering"


class TemporalError(KeyPapersError):
    module = "temporal"


class RankingError(KeyPapersError):
    module = "ranking"


class ReportError(KeyPapersError):
    module = "report"


class SynthError(KeyPapersError):
    module = "synth"


class ParameterError(KeyPapersError, ValueError):
    """Out-of-range numeric or enum parameter."""

    def __init__(self, message: str, module: str = "config"):
        super().__init__(message)
        self.module = module
