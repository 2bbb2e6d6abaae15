"""Dense state-vector simulation of the X (n qubits) ⊗ Y (1 qubit) ⊗ Z (k qubits) workspace.

Amplitudes are held as an array of shape ``(2^n, 2, 2^k)`` indexed ``[x, y, z]``,
so the flat basis index is ``(x << (1 + k)) | (y << k) | z``. X qubit ``j`` is
coordinate ``j`` of the register label x (bit ``j`` of the integer x), matching
the :class:`~models.bits.BitString` convention; Z qubit ``j`` is bit ``j`` of z.

Gates mutate the state in place and return it, so circuits chain::

    state = QuantumState.init(n, 0).hadamard_x().oracle_xor(f).hadamard_x()
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from models.bits import BitString, BooleanFunction
from utils.f2_utils import fwht

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-9
DUMP_THRESHOLD = 1e-12

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact distribution of an X-register measurement.

    Attributes:
        n: Width of the X register.
        probs: Probability of each outcome x, indexed by the integer x.
    """

    n: int
    probs: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.probs.shape != (1 << self.n,):
            raise ValueError(f"Expected {1 << self.n} probabilities, got shape {self.probs.shape}")
        if np.any(self.probs < -NORM_TOLERANCE):
            raise ValueError("Outcome probabilities must be non-negative")
        total = float(self.probs.sum())
        if abs(total - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"Outcome probabilities sum to {total}, expected 1")

    def __getitem__(self, x: BitString) -> float:
        if x.length != self.n:
            raise ValueError(f"Outcome must have {self.n} bits, got {x.length}")
        return float(self.probs[x.value])

    def as_dict(self, threshold: float = DUMP_THRESHOLD) -> dict[str, float]:
        """Outcomes with probability above ``threshold``, keyed by label."""
        return {
            BitString(int(x), self.n).to_label(): float(p)
            for x, p in enumerate(self.probs)
            if p > threshold
        }

    def support(self, threshold: float = DUMP_THRESHOLD) -> list[BitString]:
        return [BitString(int(x), self.n) for x in np.flatnonzero(self.probs > threshold)]

    def sample(self, rng: np.random.Generator) -> BitString:
        return BitString(int(rng.choice(self.probs.size, p=self.normalized())), self.n)

    def normalized(self, floor: float = 0.0) -> npt.NDArray[np.float64]:
        """Probabilities with values at or below ``floor`` zeroed, rescaled to sum 1."""
        clipped = np.where(self.probs > floor, self.probs, 0.0)
        return clipped / clipped.sum()


class QuantumState:
    """Complex amplitude vector over X ⊗ Y ⊗ Z.

    Qubit j of a register is bit j of its basis index, so qubit 0 is the least
    significant bit, matching coordinate j of :class:`BitString`. Labels from
    :meth:`dump` are written most significant first: the X part is the label of
    x, with qubit 0 as its rightmost character, followed by y and then z.

    A state is mutated in place by its gates and must not be shared between
    workers; use :meth:`copy` to branch.

    Attributes:
        n: Number of X qubits.
        k: Number of Z qubits.
    """

    def __init__(self, n: int, k: int, amp: npt.NDArray[np.complex128]) -> None:
        if n < 1:
            raise ValueError(f"X register needs n >= 1, got {n}")
        if k < 0:
            raise ValueError(f"Z register needs k >= 0, got {k}")
        shape = (1 << n, 2, 1 << k)
        if amp.shape != shape:
            raise ValueError(f"Amplitude array has shape {amp.shape}, expected {shape}")
        self.n = n
        self.k = k
        self._amp = amp

    @classmethod
    def init(cls, n: int, k: int) -> "QuantumState":
        """Basis state ``|0^n>|0>|0^k>``."""
        if n < 1 or k < 0:
            raise ValueError(f"Invalid register sizes n={n}, k={k}")
        amp = np.zeros((1 << n, 2, 1 << k), dtype=np.complex128)
        amp[0, 0, 0] = 1.0
        return cls(n, k, amp)

    @classmethod
    def from_amplitudes(
        cls, n: int, k: int, amplitudes: npt.ArrayLike, normalize: bool = False
    ) -> "QuantumState":
        """Build a state from a flat amplitude vector of length ``2^(n+1+k)``.

        Raises:
            ValueError: If the length is wrong or the vector is not unit norm
                (and ``normalize`` is off).
        """
        flat = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        expected = 1 << (n + 1 + k)
        if flat.size != expected:
            raise ValueError(f"Expected {expected} amplitudes, got {flat.size}")
        norm = float(np.linalg.norm(flat))
        if normalize:
            if norm == 0.0:
                raise ValueError("Cannot normalize the zero vector")
            flat = flat / norm
        elif abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"State norm {norm} is not 1")
        return cls(n, k, flat.reshape(1 << n, 2, 1 << k).copy())

    @classmethod
    def random(cls, n: int, k: int, rng: np.random.Generator) -> "QuantumState":
        """Haar-style random state (normalized complex Gaussian)."""
        size = 1 << (n + 1 + k)
        raw = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        return cls.from_amplitudes(n, k, raw, normalize=True)

    @property
    def dim(self) -> int:
        return self._amp.size

    @property
    def amplitudes(self) -> npt.NDArray[np.complex128]:
        """Flat copy of the amplitude vector in basis-index order."""
        return self._amp.reshape(-1).copy()

    def amplitude(self, x: int, y: int, z: int = 0) -> complex:
        return complex(self._amp[x, y, z])

    def copy(self) -> "QuantumState":
        return QuantumState(self.n, self.k, self._amp.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self._amp))

    def max_deviation(self, other: "QuantumState") -> float:
        """Largest absolute amplitude difference to a state of the same shape."""
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError(
                f"Cannot compare states with shapes (n={self.n}, k={self.k}) "
                f"and (n={other.n}, k={other.k})"
            )
        return float(np.max(np.abs(self._amp - other._amp)))

    # Gates

    def hadamard_x(self) -> "QuantumState":
        """Apply ``H^{⊗n}`` to X."""
        self._amp = fwht(self._amp) / math.sqrt(1 << self.n)
        return self

    def oracle_xor(self, f: BooleanFunction) -> "QuantumState":
        """``|x, y, z> -> |x, y ⊕ f(x), z>``.

        Raises:
            ValueError: If ``f`` has a different domain size.
        """
        if f.n != self.n:
            raise ValueError(f"Oracle over {f.n} bits does not fit an X register of {self.n}")
        ones = f.values.astype(bool)
        self._amp[ones] = self._amp[ones][:, ::-1, :]
        return self

    def prepare_y_minus(self) -> "QuantumState":
        """NOT then Hadamard on Y, turning ``|0>`` into ``(|0> - |1>)/sqrt(2)``."""
        flipped = self._amp[:, ::-1, :]
        a = flipped[:, 0, :].copy()
        b = flipped[:, 1, :].copy()
        self._amp = np.stack(((a + b) * _SQRT_HALF, (a - b) * _SQRT_HALF), axis=1)
        return self

    def cnot_x_to_z(self, x_qubit: int, z_qubit: int) -> "QuantumState":
        """Controlled-NOT with control X qubit ``x_qubit`` and target Z qubit ``z_qubit``."""
        self._check_x(x_qubit)
        self._check_z(z_qubit)
        controls = ((np.arange(1 << self.n) >> x_qubit) & 1).astype(bool)
        flip = np.arange(1 << self.k) ^ (1 << z_qubit)
        self._amp[controls] = self._amp[controls][:, :, flip]
        return self

    def xor_x_conditional(self, z_vec: BitString, z_qubit: int) -> "QuantumState":
        """``|x> -> |x ⊕ z_vec>`` on X for the branches where Z qubit ``z_qubit`` is 1."""
        if z_vec.length != self.n:
            raise ValueError(f"Shift vector needs {self.n} bits, got {z_vec.length}")
        self._check_z(z_qubit)
        shifted = np.arange(1 << self.n) ^ z_vec.value
        active = ((np.arange(1 << self.k) >> z_qubit) & 1).astype(bool)
        self._amp[:, :, active] = self._amp[shifted][:, :, active]
        return self

    def hadamard_z(self, z_qubit: int) -> "QuantumState":
        """Single-qubit Hadamard on Z qubit ``z_qubit``."""
        self._check_z(z_qubit)
        amp = np.ascontiguousarray(self._amp)
        view = amp.reshape(1 << self.n, 2, 1 << (self.k - 1 - z_qubit), 2, 1 << z_qubit)
        a = view[:, :, :, 0, :].copy()
        b = view[:, :, :, 1, :].copy()
        view[:, :, :, 0, :] = (a + b) * _SQRT_HALF
        view[:, :, :, 1, :] = (a - b) * _SQRT_HALF
        self._amp = amp
        return self

    # Measurement

    def x_distribution(self) -> OutcomeDistribution:
        """Marginal distribution of the X register."""
        probs = np.sum(np.abs(self._amp) ** 2, axis=(1, 2))
        return OutcomeDistribution(self.n, probs)

    def p0_norm_sq(self) -> float:
        """``||P_0 |psi>||^2``, the probability of X-outcome ``0^n``."""
        return float(np.sum(np.abs(self._amp[0]) ** 2))

    def measure_x(self, rng: np.random.Generator) -> tuple[BitString, "QuantumState"]:
        """Sample an X outcome and return it with the collapsed, renormalized state.

        The receiver is left untouched.
        """
        outcome = self.x_distribution().sample(rng)
        collapsed = np.zeros_like(self._amp)
        collapsed[outcome.value] = self._amp[outcome.value]
        collapsed /= np.linalg.norm(collapsed)
        logger.debug(f"measure_x -> {outcome.to_label()}")
        return outcome, QuantumState(self.n, self.k, collapsed)

    def dump(self, threshold: float = DUMP_THRESHOLD) -> str:
        """Text lines ``index(bits) re im`` for amplitudes above ``threshold``.

        ``bits`` is the basis label x|y|z as one binary numeral of width n+1+k.
        """
        width = self.n + 1 + self.k
        lines = []
        for index, a in enumerate(self._amp.reshape(-1)):
            if abs(a) > threshold:
                lines.append(f"{index}({index:0{width}b}) {a.real:.12f} {a.imag:.12f}")
        return "\n".join(lines)

    def _check_x(self, j: int) -> None:
        if not 0 <= j < self.n:
            raise ValueError(f"X qubit {j} out of range for n={self.n}")

    def _check_z(self, j: int) -> None:
        if not 0 <= j < self.k:
            raise ValueError(f"Z qubit {j} out of range for k={self.k}")
