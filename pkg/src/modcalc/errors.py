"""Exception hierarchy shared by all modules."""


class ModcalcError(Exception):
    pass


class InvalidGraph(ModcalcError):
    pass


class NotATree(InvalidGraph):
    pass


class GenusSumNot2(InvalidGraph):
    pass


class Unstable(InvalidGraph):
    def __init__(self, vertex: str):
        super().__init__(f"vertex {vertex!r} has genus 0, weight 0 and valence < 3")
        self.vertex = vertex


class BadCoreShape(InvalidGraph):
    pass


class NotATailVertex(ModcalcError):
    pass


class EmptyVocabulary(ModcalcError):
    pass


class NotProperSubset(ModcalcError):
    pass


class FreshCollision(ModcalcError):
    pass


class DepthRegression(ModcalcError):
    pass


class OrderRegression(ModcalcError):
    pass


class StepBudgetExceeded(ModcalcError):
    pass


class ChiOnForcedZero(ModcalcError):
    pass


class FlagOnNonCritical(ModcalcError):
    pass


class InconsistentFlags(ModcalcError):
    pass


class NotDiagonalized(ModcalcError):
    pass


class GraphSyntaxError(ModcalcError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
