"""End-to-end execution of the caching scheme described by a PDA.

Placement fills each user's cache with the packets marked by stars in its
column; delivery broadcasts one XOR per symbol; decoding cancels cached
interference and must reproduce every requested file byte-for-byte.  The
measured quantities (cache bytes, bytes on the wire, load) are counted from
the actual byte traffic, not read off formulas.

Packets are fixed-width byte blocks held as integers so XOR is a single
operation; file contents are reproducible from a recorded 64-bit seed.
Demands are 0-based file indices.
"""

from __future__ import annotations

import itertools
import random
import weakref
from dataclasses import dataclass
from fractions import Fraction

from .pda import STAR, Pda

DEFAULT_PACKET_LEN = 16


class UnrecoverablePacketError(RuntimeError):
    """A decode step needed an interfering packet missing from the cache.

    For a valid PDA this cannot happen (the cross-cell star guarantees the
    interferer is cached); seeing it means the array or cache is corrupt.
    """


@dataclass(frozen=True)
class FileLibrary:
    """N files of F packets each, every packet exactly packet_len bytes."""

    packet_len: int
    packets: tuple[tuple[int, ...], ...]
    seed: int | None = None

    def __post_init__(self):
        if self.packet_len < 1:
            raise ValueError("packet_len must be >= 1")
        if not self.packets or not self.packets[0]:
            raise ValueError("library must hold at least one file and packet")
        width = len(self.packets[0])
        if any(len(f) != width for f in self.packets):
            raise ValueError("all files must have the same packet count")
        limit = 1 << (8 * self.packet_len)
        if any(not (0 <= p < limit) for f in self.packets for p in f):
            raise ValueError(f"packet values must fit in {self.packet_len} bytes")

    @property
    def N(self) -> int:
        return len(self.packets)

    @property
    def F(self) -> int:
        return len(self.packets[0])

    @classmethod
    def random(
        cls, N: int, F: int, packet_len: int = DEFAULT_PACKET_LEN, seed: int = 0
    ) -> "FileLibrary":
        """Deterministic pseudo-random contents from a 64-bit seed."""
        rng = random.Random(seed)
        bits = 8 * packet_len
        packets = tuple(
            tuple(rng.getrandbits(bits) for _ in range(F)) for _ in range(N)
        )
        return cls(packet_len, packets, seed)

    def packet_bytes(self, n: int, j: int) -> bytes:
        return self.packets[n][j].to_bytes(self.packet_len, "big")

    def file_bytes(self, n: int) -> bytes:
        return b"".join(self.packet_bytes(n, j) for j in range(self.F))


@dataclass(frozen=True)
class CacheContents:
    """Per-user caches: user k holds packet (n, j) iff cell (j, k) is a star."""

    users: tuple[dict, ...]  # each dict maps (file, packet) -> packet value

    def cached_bytes(self, k: int, packet_len: int) -> int:
        return len(self.users[k]) * packet_len


@dataclass(frozen=True)
class Transmission:
    symbol: int
    payload: bytes
    contributors: tuple[tuple[int, int], ...]  # (user, packet index)


@dataclass(frozen=True)
class DeliveryTranscript:
    """Everything the server put on the wire for one demand vector."""

    demands: tuple[int, ...]
    transmissions: tuple[Transmission, ...]
    bytes_on_wire: int
    packet_len: int
    seed: int | None


def place(pda: Pda, library: FileLibrary) -> CacheContents:
    """Run the placement phase: star cells decide what each user caches."""
    if library.F != pda.F:
        raise ValueError(
            f"library has {library.F} packets per file, PDA needs {pda.F}"
        )
    users = []
    for k in range(pda.K):
        star_rows = [j for j in range(pda.F) if pda.grid[j, k] == STAR]
        cache = {
            (n, j): library.packets[n][j]
            for n in range(library.N)
            for j in star_rows
        }
        users.append(cache)
    return CacheContents(tuple(users))


# Demand sweeps call deliver/decode thousands of times on one grid, so the
# grid scan is memoized per PDA object (keyed weakly by identity).
_LAYOUTS: "weakref.WeakKeyDictionary[Pda, tuple]" = weakref.WeakKeyDictionary()


def _layout(pda: Pda) -> tuple[list[list[tuple[int, int]]], list[list[int]]]:
    """(contributors, columns): cells per symbol ordered by user, and the
    plain-int symbol column of each user."""
    cached = _LAYOUTS.get(pda)
    if cached is not None:
        return cached
    columns = [[int(s) for s in pda.grid[:, k]] for k in range(pda.K)]
    contributors: list[list[tuple[int, int]]] = [[] for _ in range(pda.S + 1)]
    for k in range(pda.K):
        for j, s in enumerate(columns[k]):
            if s != STAR:
                contributors[s].append((j, k))
    _LAYOUTS[pda] = (contributors, columns)
    return contributors, columns


def deliver(
    pda: Pda,
    library: FileLibrary,
    cache: CacheContents,
    demands: tuple[int, ...] | list[int],
) -> DeliveryTranscript:
    """Broadcast, for each symbol s, the XOR of the demanded packets it marks.

    The cache argument documents that delivery happens after placement; the
    server only reads the library.  Exactly S transmissions of one packet
    each are sent, so the measured load is S/F regardless of the demand.
    """
    d = tuple(int(x) for x in demands)
    if len(d) != pda.K:
        raise ValueError(f"demand vector must have K={pda.K} entries")
    if any(not (0 <= x < library.N) for x in d):
        raise ValueError(f"demands must be 0-based file indices below N={library.N}")
    if library.F != pda.F:
        raise ValueError("library packet count does not match the PDA")

    table, _ = _layout(pda)
    packets = library.packets
    transmissions = []
    for s in range(1, pda.S + 1):
        payload = 0
        contributors = []
        for j, k in table[s]:
            payload ^= packets[d[k]][j]
            contributors.append((k, j))
        transmissions.append(
            Transmission(s, payload.to_bytes(library.packet_len, "big"), tuple(contributors))
        )
    return DeliveryTranscript(
        demands=d,
        transmissions=tuple(transmissions),
        bytes_on_wire=pda.S * library.packet_len,
        packet_len=library.packet_len,
        seed=library.seed,
    )


def decode(pda: Pda, cache: CacheContents, transcript: DeliveryTranscript, k: int) -> bytes:
    """Recover user k's requested file from its cache plus the broadcast.

    For every non-star cell (j, k) with symbol s the user cancels all other
    contributions to transmission s using cached packets, leaving its own
    missing packet; star rows come straight from the cache.
    """
    if not (0 <= k < pda.K):
        raise ValueError(f"user index {k} out of range for K={pda.K}")
    _, columns = _layout(pda)
    d = transcript.demands
    own = cache.users[k]
    parts: list[bytes] = []
    for j, s in enumerate(columns[k]):
        if s == STAR:
            try:
                value = own[(d[k], j)]
            except KeyError:
                raise UnrecoverablePacketError(
                    f"user {k} should have cached packet ({d[k]}, {j})"
                ) from None
        else:
            txn = transcript.transmissions[s - 1]
            assert txn.symbol == s
            value = int.from_bytes(txn.payload, "big")
            for user, packet in txn.contributors:
                if user == k:
                    continue
                try:
                    value ^= own[(d[user], packet)]
                except KeyError:
                    raise UnrecoverablePacketError(
                        f"user {k} lacks interfering packet ({d[user]}, {packet}) "
                        f"needed for symbol {s}"
                    ) from None
        parts.append(value.to_bytes(transcript.packet_len, "big"))
    return b"".join(parts)


@dataclass(frozen=True)
class DemandCheckReport:
    """Aggregate result of sweeping demand vectors through the scheme."""

    total_demands: int
    checked: int
    exhaustive: bool
    failures: tuple
    nominal_load: Fraction
    max_measured_load: Fraction
    loads_all_equal: bool
    seed: int

    @property
    def ok(self) -> bool:
        return not self.failures and self.loads_all_equal


def _demand_iter(N: int, K: int, budget: int, seed: int):
    total = N**K
    if total <= budget:
        return total, True, itertools.product(range(N), repeat=K)

    def sampled():
        yield (0,) * K  # all-equal corner
        if N >= K:
            yield tuple(range(K))  # all-distinct corner
        rng = random.Random(seed)
        for _ in range(budget):
            yield tuple(rng.randrange(N) for _ in range(K))

    return total, False, sampled()


def exhaustive_demand_check(
    pda: Pda,
    N: int,
    packet_len: int = DEFAULT_PACKET_LEN,
    demand_budget: int = 1_000_000,
    seed: int = 0,
) -> DemandCheckReport:
    """Run place/deliver/decode over all N^K demands (or a seeded sample).

    Every user of every checked demand must recover its file byte-exactly,
    and the measured load bytes_on_wire / (F * packet_len) must equal S/F
    for each vector.  When N^K exceeds the budget, a deterministic sample
    plus the all-equal and (when N >= K) all-distinct corners is used.
    """
    library = FileLibrary.random(N, pda.F, packet_len, seed)
    cache = place(pda, library)
    expected = [library.file_bytes(n) for n in range(N)]
    nominal = Fraction(pda.S, pda.F)

    total, exhaustive, demands = _demand_iter(N, pda.K, demand_budget, seed)
    failures = []
    max_load = Fraction(0)
    checked = 0
    for d in demands:
        checked += 1
        transcript = deliver(pda, library, cache, d)
        load = Fraction(transcript.bytes_on_wire, pda.F * packet_len)
        max_load = max(max_load, load)
        if load != nominal:
            failures.append((d, None, f"measured load {load} != nominal {nominal}"))
        for k in range(pda.K):
            try:
                got = decode(pda, cache, transcript, k)
            except UnrecoverablePacketError as exc:
                failures.append((d, k, str(exc)))
                continue
            if got != expected[d[k]]:
                failures.append((d, k, "decoded bytes differ from the library file"))

    return DemandCheckReport(
        total_demands=total,
        checked=checked,
        exhaustive=exhaustive,
        failures=tuple(failures),
        nominal_load=nominal,
        max_measured_load=max_load,
        loads_all_equal=not any(f[1] is None for f in failures),
        seed=seed,
    )
