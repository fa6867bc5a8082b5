class CipherBenchError(Exception):
    """Base class for all library errors."""


class ContractError(CipherBenchError, ValueError):
    """An argument violated a width, range, or shape contract."""


class HexParseError(CipherBenchError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class InvalidKeyError(CipherBenchError, ValueError):
    pass


class PaddingError(CipherBenchError, ValueError):
    pass


class LengthError(CipherBenchError, ValueError):
    """Ciphertext or block length does not fit the mode or cipher."""


class UndefinedFactorError(CipherBenchError, ValueError):
    pass
