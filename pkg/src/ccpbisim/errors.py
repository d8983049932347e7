"""Exception types shared across the package."""


class CcpError(Exception):
    """Base class for all checker errors."""


class UnknownAtom(CcpError):
    def __init__(self, name):
        super().__init__("unknown atom: %s" % name)
        self.name = name


class TooManyAtoms(CcpError):
    def __init__(self, count, threshold):
        super().__init__(
            "atom count %d exceeds enumeration threshold %d" % (count, threshold))
        self.count = count
        self.threshold = threshold


class HidingLawViolation(CcpError):
    pass


class NoCylindrification(CcpError):
    def __init__(self, var):
        super().__init__("no hiding table for variable %r" % var)
        self.var = var


class NoSchematicAtoms(CcpError):
    def __init__(self, atom, var):
        super().__init__(
            "cannot rename variable %r inside opaque atom %r" % (var, atom))
        self.atom = atom
        self.var = var


class ProgramSyntaxError(CcpError):
    def __init__(self, message, line, col):
        super().__init__("%d:%d: %s" % (line, col, message))
        self.line = line
        self.col = col


class DuplicateProcedure(CcpError):
    def __init__(self, name):
        super().__init__("procedure %r defined twice" % name)
        self.name = name


class UnboundFreeVariable(CcpError):
    def __init__(self, var, where):
        super().__init__("unbound variable %r in %s" % (var, where))
        self.var = var


class StateSpaceExceeded(CcpError):
    def __init__(self, bound):
        super().__init__("state space exceeds bound %d" % bound)
        self.bound = bound


class InvalidParameter(CcpError):
    pass


class NotDominating(CcpError):
    def __init__(self, alpha, beta):
        super().__init__("label %s does not strictly precede %s" % (alpha, beta))


class MissingDerivedState(CcpError):
    def __init__(self, config):
        super().__init__("derived state %s not present in space" % (config,))
        self.config = config
