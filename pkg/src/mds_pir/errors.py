class PirError(Exception):
    pass


class ParameterError(PirError, ValueError):
    pass


class FieldCapacityError(ParameterError):
    pass


class FieldDivisionError(PirError, ZeroDivisionError):
    pass


class ConstructionError(PirError):
    def __init__(self, msg, pair=None, *args):
        super(ConstructionError, self).__init__(msg, *args)
        self.pair = pair


class SearchFailureError(ConstructionError):
    def __init__(self, msg, diagnostics=None, *args):
        super(SearchFailureError, self).__init__(msg, None, *args)
        self.diagnostics = diagnostics or {}


class DecodeError(PirError):
    def __init__(self, msg, subset=None, *args):
        super(DecodeError, self).__init__(msg, *args)
        self.subset = subset


class ReconstructionError(PirError):
    def __init__(self, msg, k_star=None, f=None, *args):
        super(ReconstructionError, self).__init__(msg, *args)
        self.k_star = k_star
        self.f = f


class UnsupportedFamilyError(PirError):
    pass


class SchemaValidationError(PirError):
    def __init__(self, msg, errors=None, document=None, source_codec=None, *args):
        super(SchemaValidationError, self).__init__(msg, *args)
        self.errors = errors
        self.document = document
        self.source_codec = source_codec
