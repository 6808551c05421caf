"""Type-I key-replacement forgery and the unforgeability experiment.

The adversary modelled here holds no user secrets and no KGC secret.  Its
single capability is the one a certificateless PKI leaves open: because
nothing binds an identity to a public key, it may overwrite the sender's
registered key pair with points of its own choosing.  Holding the
discrete logs (a*, b*) of the replacement keys, it can run the normal
sender computation -- with one twist in CT2, which pre-subtracts
H1(id_S, b*P) * P' so that the receiver's partial-key reconstruction
cancels to b*P.  Every listed receiver then accepts the forgery and
recovers the adversary's message.

The experiment harness keeps challenger and adversary capabilities apart:
the adversary object is built from public registry data plus its own
randomness, and the registry logs every secret-extraction oracle call
(the attack makes none -- the log is part of the success predicate).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .group import GroupParams, OpCounter, point_mul, point_sub, scalar_random
from .oracles import partial_key_hash
from .scheme import (
    Ciphertext,
    MasterSecret,
    ReceiverSet,
    SystemParams,
    assemble_ciphertext,
    decrypt,
    derive_receiver_values,
    user_keygen,
)

__all__ = [
    "ReplacedSenderKey",
    "KeyRegistry",
    "ExperimentReport",
    "replace_sender_key",
    "forge_ciphertext",
    "run_euf_cma_experiment",
]


@dataclass
class ReplacedSenderKey:
    """The adversary's replacement key material for one sender identity."""

    sender_id: str
    a_star: int
    b_star: int
    pk1_star: object  # a* P
    pk2_star: object  # b* P
    installed: bool = True  # False when the registry refused the swap


class KeyRegistry:
    """Identity -> public key map with no identity/key binding.

    Lookups always return whatever was stored last, so a replaced key is
    served to receivers exactly like an honest one.  Secret material is
    held for the extraction oracles only; every call that touches it is
    logged, which lets tests prove the forgery never reads a secret.
    """

    def __init__(self):
        self._public = {}
        self._secret = {}
        self.log = []
        self.locked = False

    def register(self, identity: str, pk1, pk2) -> None:
        self._public[identity] = (pk1, pk2)
        self.log.append(("register", identity))

    def register_user(self, kp) -> None:
        self.register(kp.id, kp.pk1, kp.pk2)
        self._secret[kp.id] = (kp.sk1, kp.sk2)

    def lookup(self, identity: str):
        return self._public[identity]

    def replace(self, identity: str, pk1, pk2) -> bool:
        if identity not in self._public:
            raise KeyError(identity)
        if self.locked:
            self.log.append(("replace-denied", identity))
            return False
        self._public[identity] = (pk1, pk2)
        self.log.append(("replace", identity))
        return True

    def lock(self) -> None:
        self.locked = True

    def extract_secret_value(self, identity: str) -> int:
        self.log.append(("extract-secret-value", identity))
        return self._secret[identity][0]

    def extract_partial_key(self, identity: str) -> int:
        self.log.append(("extract-partial-key", identity))
        return self._secret[identity][1]

    def extraction_events(self):
        return [e for e in self.log if e[0].startswith("extract")]

    def replacement_events(self):
        return [e for e in self.log if e[0].startswith("replace")]


def replace_sender_key(params: SystemParams, registry: KeyRegistry,
                       sender_id: str, rng, ctr: OpCounter | None = None) -> ReplacedSenderKey:
    """Stage one: overwrite the sender's registered keys with a*P, b*P.

    On a locked registry the swap is denied (and logged); the adversary
    still keeps its own material and may proceed, which is exactly the
    control run showing the forgery needs the replacement capability.
    """
    registry.lookup(sender_id)  # KeyError for unknown identities
    g = params.group
    a_star = scalar_random(g, rng, ctr=ctr)
    b_star = scalar_random(g, rng, ctr=ctr)
    pk1_star = point_mul(g, a_star, g.generator, ctr)
    pk2_star = point_mul(g, b_star, g.generator, ctr)
    installed = registry.replace(sender_id, pk1_star, pk2_star)
    return ReplacedSenderKey(sender_id, a_star, b_star, pk1_star, pk2_star, installed)


def forge_ciphertext(params: SystemParams, adv: ReplacedSenderKey,
                     rcvr: ReceiverSet, m: int, rng,
                     ctr: OpCounter | None = None) -> Ciphertext:
    """Stage two: a ciphertext under the replaced keys, no sender secret used.

    Identical construction path to honest encryption except for CT2, where
    s P is shifted by -H1(id_S, b*P) P' so that decryption's partial-key
    term collapses to the known b*.
    """
    g, suite = params.group, params.suite
    if not 0 <= m < (1 << suite.l1):
        raise ValueError("message must be exactly l1 bits")
    r = scalar_random(g, rng, ctr=ctr)
    s = scalar_random(g, rng, ctr=ctr)
    d1 = scalar_random(g, rng, ctr=ctr)
    d2 = scalar_random(g, rng, ctr=ctr)
    ct1 = point_mul(g, r, g.generator, ctr)
    h1_s = partial_key_hash(g, suite, adv.sender_id, adv.pk2_star, ctr)
    ct2 = point_sub(g, point_mul(g, s, g.generator, ctr),
                    point_mul(g, h1_s, params.master_pub, ctr), ctr)
    roots_v, roots_z = derive_receiver_values(
        params, adv.sender_id, adv.a_star, adv.b_star, r, s, rcvr, ctr)
    return assemble_ciphertext(params, ct1, ct2, roots_v, roots_z, d1, d2, m, ctr)


@dataclass
class ExperimentReport:
    n: int
    trials: int
    success_rate: float
    ops: dict  # {"step1": {...}, "step2": {...}, "step3": {...}} per trial
    wall_ms: float
    # per-trial wall of the attack window (replace + forge + one verification);
    # kept for timing statistics, not serialized
    trial_ms: list = field(default_factory=list)
    backend_id: str = ""

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "success_rate": self.success_rate,
            "ops": self.ops,
            "wall_ms": self.wall_ms,
        }


def run_euf_cma_experiment(params: SystemParams, msk: MasterSecret, n: int,
                           trials: int, rng, lock_registry: bool = False) -> ExperimentReport:
    """Full forgery experiment: fresh users each trial, forge, verify.

    A trial succeeds only if every listed receiver accepts the forged
    ciphertext and recovers the adversary's message, and the registry log
    shows no secret extraction.  ``lock_registry`` runs the control
    experiment with replacement disabled.

    Per-trial wall time covers the attack window -- key replacement,
    forging, and one receiver's verification (the cost-table accounting);
    the remaining receivers are verified outside the clock.  Reported op
    counts are per trial; step3 sums the decryptions of all n receivers.
    """
    if n < 1:
        raise ValueError("need at least one receiver")
    g = params.group
    step_ops = None
    trial_ms = []
    successes = 0
    t_start = time.perf_counter()
    for t in range(trials):
        setup_ctr = OpCounter()
        sender = user_keygen(params, msk, "sender", rng)
        receivers = [user_keygen(params, msk, "receiver-%d" % i, rng) for i in range(n)]
        registry = KeyRegistry()
        registry.register_user(sender)
        for kp in receivers:
            registry.register_user(kp)
        rcvr = ReceiverSet.build(
            params, [(kp.id, kp.pk1, kp.pk2) for kp in receivers], setup_ctr)
        if lock_registry:
            registry.lock()
        message = rng.getrandbits(params.suite.l1)
        c1, c2, c3 = OpCounter(), OpCounter(), OpCounter()

        t0 = time.perf_counter()
        adv = replace_sender_key(params, registry, sender.id, rng, c1)
        ct = forge_ciphertext(params, adv, rcvr, message, rng, c2)
        sender_pk = registry.lookup(sender.id)
        ok = decrypt(params, receivers[0], sender.id, sender_pk, ct, c3) == message
        t1 = time.perf_counter()

        for kp in receivers[1:]:
            ok = decrypt(params, kp, sender.id, sender_pk, ct, c3) == message and ok
        ok = ok and not registry.extraction_events()
        successes += 1 if ok else 0
        trial_ms.append((t1 - t0) * 1000.0)
        if step_ops is None:
            step_ops = {"step1": c1.as_dict(), "step2": c2.as_dict(), "step3": c3.as_dict()}
    wall_ms = (time.perf_counter() - t_start) * 1000.0
    return ExperimentReport(
        n=n,
        trials=trials,
        success_rate=successes / trials if trials else 0.0,
        ops=step_ops or {},
        wall_ms=wall_ms,
        trial_ms=trial_ms,
        backend_id=g.backend_id,
    )
