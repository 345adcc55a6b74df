"""Exception hierarchy.  Every error carries a machine-readable ``code``."""


class B2P1Error(Exception):
    code = "error"
    exit_status = 1


class NonFiniteError(B2P1Error, FloatingPointError):
    code = "non_finite"
    exit_status = 3


class NonFiniteState(NonFiniteError):
    code = "non_finite_state"


class DerivativeOrderTooHigh(B2P1Error, ValueError):
    code = "derivative_order"


class SingularSymbol(B2P1Error, ZeroDivisionError):
    code = "singular_symbol"
    exit_status = 3

    def __init__(self, mode, value):
        self.mode = mode
        self.value = value
        super().__init__(f"operator symbol vanishes at mode {mode} (|P|={value:.3e}) "
                         "with a nonzero right-hand side")


class InvalidParameter(B2P1Error, ValueError):
    code = "invalid_parameter"
    exit_status = 2


class RegimeError(InvalidParameter):
    code = "regime"


class BathymetryError(InvalidParameter):
    code = "bathymetry"


class SlopeTooLarge(B2P1Error, ValueError):
    code = "slope_too_large"
    exit_status = 3


class PicardDiverged(B2P1Error, ArithmeticError):
    code = "picard_diverged"
    exit_status = 3

    def __init__(self, iters, last_update):
        self.iters = iters
        self.last_update = last_update
        super().__init__(f"Picard iteration did not converge in {iters} iterations "
                         f"(last update {last_update:.3e})")


class UnsupportedRegime(B2P1Error, NotImplementedError):
    code = "unsupported_regime"
    exit_status = 2


class MissingDerivative(B2P1Error, KeyError):
    code = "missing_derivative"

    def __init__(self, order):
        self.order = order
        super().__init__(f"jet cannot supply derivative (nx, ny, nt) = {order}")

    def __str__(self):
        return self.args[0]


class TauNotNegligible(B2P1Error, ValueError):
    code = "tau_not_negligible"
    exit_status = 2


class NonHarmonicBathymetry(B2P1Error, ValueError):
    code = "non_harmonic_bathymetry"
    exit_status = 2


class ResonantForcing(B2P1Error, ArithmeticError):
    code = "resonant_forcing"
    exit_status = 4

    def __init__(self, harmonic, denominator):
        self.harmonic = harmonic
        self.denominator = denominator
        super().__init__(f"source harmonic {harmonic} lies on the dispersion surface "
                         f"(|D|={abs(denominator):.3e})")


class OffGridMode(B2P1Error, ValueError):
    code = "off_grid_mode"
    exit_status = 2


class ConfigError(B2P1Error, ValueError):
    code = "config"
    exit_status = 2

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class MissingKey(ConfigError):
    code = "missing_key"


class UnknownKey(ConfigError):
    code = "unknown_key"


class ConfigTypeError(ConfigError):
    code = "type_error"


class SnapshotError(B2P1Error, ValueError):
    code = "snapshot"
    exit_status = 2


class BadMagic(SnapshotError):
    code = "bad_magic"


class TruncatedPayload(SnapshotError):
    code = "truncated_payload"


class ChecksumMismatch(SnapshotError):
    code = "checksum_mismatch"
