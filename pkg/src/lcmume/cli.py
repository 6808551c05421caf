"""Command-line front end and JSON file formats.

Subcommands: setup, keygen, encrypt, decrypt, forge, game, bench, vectors.
Exit codes: 0 success, 2 decryption reject, 1 usage or I/O error.

File schemas (UTF-8 JSON, lowercase hex, sorted keys):
  lcmume-params-v1  system parameters plus the KGC master secret
  lcmume-key-v1     user key; secret fields only in private files
  lcmume-ct-v1      ciphertext tuple
"""

from __future__ import annotations

import argparse
import json
import random
import secrets
import sys

from . import bench as bench_mod
from .attack import ReplacedSenderKey, forge_ciphertext, run_euf_cma_experiment
from .group import group_by_name, point_mul, scalar_random
from .oracles import ORACLE_TAGS, HashSuite, xof
from .scheme import (
    Ciphertext,
    MasterSecret,
    ReceiverSet,
    SystemParams,
    UserKeyPair,
    decrypt,
    encrypt,
    setup,
    user_keygen,
)

PARAMS_SCHEMA = "lcmume-params-v1"
KEY_SCHEMA = "lcmume-key-v1"
CT_SCHEMA = "lcmume-ct-v1"

REJECT_MARK = "⊥"  # the reject symbol


class CliError(Exception):
    pass


def _dump(obj: dict) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8")


def write_json(path: str, obj: dict) -> None:
    with open(path, "wb") as fh:
        fh.write(_dump(obj))


def read_json(path: str, schema: str) -> dict:
    try:
        with open(path, "rb") as fh:
            obj = json.loads(fh.read().decode("utf-8"))
    except OSError as e:
        raise CliError("cannot read %s: %s" % (path, e))
    except ValueError as e:
        raise CliError("malformed JSON in %s: %s" % (path, e))
    if not isinstance(obj, dict) or obj.get("schema") != schema:
        raise CliError("%s: expected schema %r" % (path, schema))
    return obj


# ---------------------------------------------------------------------------
# file formats


def params_to_dict(params: SystemParams, msk: MasterSecret) -> dict:
    d = {"schema": PARAMS_SCHEMA,
         "group": params.group.to_dict(),
         "suite": params.suite.to_dict(),
         "master_pub_hex": params.group.element_to_hex(params.master_pub),
         "lambda_hex": params.group.scalar_to_hex(msk.lam)}
    return d


def params_from_dict(d: dict):
    from .group import GroupParams

    group = GroupParams.from_dict(d["group"])
    suite = HashSuite.from_dict(d["suite"])
    master_pub = group.element_from_hex(d["master_pub_hex"])
    params = SystemParams(group, suite, master_pub)
    msk = MasterSecret(group.scalar_from_hex(d["lambda_hex"]))
    if group.mul(msk.lam, group.generator) != master_pub:
        raise CliError("master secret does not match master public key")
    return params, msk


def save_params(path: str, params: SystemParams, msk: MasterSecret) -> None:
    write_json(path, params_to_dict(params, msk))


def load_params(path: str):
    try:
        return params_from_dict(read_json(path, PARAMS_SCHEMA))
    except (KeyError, ValueError) as e:
        raise CliError("bad params file %s: %s" % (path, e))


def key_to_dict(params: SystemParams, kp: UserKeyPair, include_secret: bool) -> dict:
    g = params.group
    d = {"schema": KEY_SCHEMA, "id": kp.id, "backend": g.backend_id,
         "pk1_hex": g.element_to_hex(kp.pk1), "pk2_hex": g.element_to_hex(kp.pk2)}
    if include_secret:
        d["sk1_hex"] = g.scalar_to_hex(kp.sk1)
        d["sk2_hex"] = g.scalar_to_hex(kp.sk2)
    return d


def key_from_dict(params: SystemParams, d: dict) -> UserKeyPair:
    g = params.group
    if d["backend"] != g.backend_id:
        raise CliError("key backend %r does not match params" % d["backend"])
    sk1 = g.scalar_from_hex(d["sk1_hex"]) if "sk1_hex" in d else None
    sk2 = g.scalar_from_hex(d["sk2_hex"]) if "sk2_hex" in d else None
    return UserKeyPair(d["id"], sk1, sk2,
                       g.element_from_hex(d["pk1_hex"]),
                       g.element_from_hex(d["pk2_hex"]))


def load_key(path: str, params: SystemParams) -> UserKeyPair:
    try:
        return key_from_dict(params, read_json(path, KEY_SCHEMA))
    except (KeyError, ValueError) as e:
        raise CliError("bad key file %s: %s" % (path, e))


def ciphertext_to_dict(params: SystemParams, ct: Ciphertext) -> dict:
    g, suite = params.group, params.suite
    return {
        "schema": CT_SCHEMA,
        "n": ct.n,
        "ct1_hex": g.element_to_hex(ct.ct1),
        "ct2_hex": g.element_to_hex(ct.ct2),
        "ct3_hex": ct.ct3.to_bytes(suite.mask_bytes, "big").hex(),
        "ct4_hex": ct.ct4.hex(),
        "a_hex": [g.scalar_to_hex(c) for c in ct.coeffs_a],
        "b_hex": [g.scalar_to_hex(c) for c in ct.coeffs_b],
    }


def ciphertext_from_dict(params: SystemParams, d: dict) -> Ciphertext:
    g = params.group
    if d["n"] != len(d["a_hex"]) or d["n"] != len(d["b_hex"]):
        raise CliError("coefficient count does not match n")
    ct3 = int.from_bytes(bytes.fromhex(d["ct3_hex"]), "big")
    if ct3 >= 1 << params.suite.l:
        raise CliError("ct3 wider than l bits")
    return Ciphertext(
        g.element_from_hex(d["ct1_hex"]),
        g.element_from_hex(d["ct2_hex"]),
        ct3,
        bytes.fromhex(d["ct4_hex"]),
        [g.scalar_from_hex(h) for h in d["a_hex"]],
        [g.scalar_from_hex(h) for h in d["b_hex"]],
    )


def load_ciphertext(path: str, params: SystemParams) -> Ciphertext:
    try:
        return ciphertext_from_dict(params, read_json(path, CT_SCHEMA))
    except (KeyError, ValueError) as e:
        raise CliError("bad ciphertext file %s: %s" % (path, e))


def _parse_message(hexstr: str, suite: HashSuite) -> int:
    want = suite.l1 // 4
    if len(hexstr) != want:
        raise CliError("message must be exactly %d hex digits (%d bits)"
                       % (want, suite.l1))
    return int(hexstr, 16)


def _message_hex(m: int, suite: HashSuite) -> str:
    return m.to_bytes(suite.l1 // 8, "big").hex()


# ---------------------------------------------------------------------------
# subcommands


def _require_params(args):
    if not args.params:
        raise CliError("this subcommand needs --params")
    return load_params(args.params)


def cmd_setup(args, rng) -> int:
    params, msk = setup(rng, group=args.backend)
    save_params(args.out, params, msk)
    return 0


def cmd_keygen(args, rng) -> int:
    params, msk = _require_params(args)
    kp = user_keygen(params, msk, args.id, rng)
    write_json(args.out, key_to_dict(params, kp, include_secret=True))
    if args.pub_out:
        write_json(args.pub_out, key_to_dict(params, kp, include_secret=False))
    return 0


def _load_receiver_set(params, paths):
    keys = [load_key(p.strip(), params) for p in paths.split(",") if p.strip()]
    if not keys:
        raise CliError("no receiver files given")
    return ReceiverSet.build(params, [(k.id, k.pk1, k.pk2) for k in keys])


def cmd_encrypt(args, rng) -> int:
    params, _ = _require_params(args)
    sender = load_key(args.sender, params)
    if sender.sk1 is None or sender.sk2 is None:
        raise CliError("sender key file has no secret material")
    rcvr = _load_receiver_set(params, args.receivers)
    ct = encrypt(params, sender, rcvr, _parse_message(args.message, params.suite), rng)
    write_json(args.out, ciphertext_to_dict(params, ct))
    return 0


def cmd_decrypt(args, rng) -> int:
    params, _ = _require_params(args)
    receiver = load_key(args.receiver, params)
    if receiver.sk1 is None or receiver.sk2 is None:
        raise CliError("receiver key file has no secret material")
    sender = load_key(args.sender_pk, params)
    ct = load_ciphertext(args.ct, params)
    m = decrypt(params, receiver, sender.id, (sender.pk1, sender.pk2), ct)
    if m is None:
        print(REJECT_MARK)
        return 2
    print(_message_hex(m, params.suite))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(_message_hex(m, params.suite) + "\n")
    return 0


def cmd_forge(args, rng) -> int:
    params, _ = _require_params(args)
    g = params.group
    rcvr = _load_receiver_set(params, args.receivers)
    a_star = scalar_random(g, rng)
    b_star = scalar_random(g, rng)
    adv = ReplacedSenderKey(args.sender_id, a_star, b_star,
                            point_mul(g, a_star, g.generator),
                            point_mul(g, b_star, g.generator))
    ct = forge_ciphertext(params, adv, rcvr,
                          _parse_message(args.message, params.suite), rng)
    write_json(args.out, ciphertext_to_dict(params, ct))
    replaced = UserKeyPair(args.sender_id, None, None, adv.pk1_star, adv.pk2_star)
    pk_out = args.replaced_pk_out or args.out + ".replaced-key.json"
    write_json(pk_out, key_to_dict(params, replaced, include_secret=False))
    return 0


def cmd_game(args, rng) -> int:
    params, msk = setup(rng, group=args.backend) if not args.params \
        else load_params(args.params)
    rep = run_euf_cma_experiment(params, msk, args.n, args.trials, rng,
                                 lock_registry=args.locked)
    sys.stdout.write(_dump(rep.to_json_dict()).decode("utf-8"))
    return 0


def cmd_bench(args, rng) -> int:
    params, msk = setup(rng, group=args.backend) if not args.params \
        else load_params(args.params)
    ns = [int(x) for x in args.n_list.split(",") if x.strip()]
    reports, rows = [], []
    for n in ns:
        ops, row = bench_mod.measure_attack(params, msk, n, trials=args.trials, rng=rng)
        reports.append(ops)
        rows.append(row)
    sys.stdout.write(bench_mod.emit_table(reports, rows, args.format).decode("utf-8"))
    return 0


def cmd_vectors(args, rng) -> int:
    group = group_by_name(args.backend)
    suite = HashSuite()
    tags = {name: suite.domain_tags[i]
            for i, name in enumerate(("root", "partial", "mask", "tag", "pair"))}
    assert tags == ORACLE_TAGS
    checked = 0
    with open(args.check) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                name, hin, hout = line.split()
            except ValueError:
                raise CliError("%s:%d: expected 'tag hex-input hex-output'"
                               % (args.check, lineno))
            if name not in tags:
                raise CliError("%s:%d: unknown oracle tag %r" % (args.check, lineno, name))
            want = bytes.fromhex(hout)
            got = xof(tags[name], [bytes.fromhex(hin)], len(want))
            if got != want:
                print("%s:%d: MISMATCH (%s)" % (args.check, lineno, name))
                return 1
            checked += 1
    print("ok: %d vectors (backend %s)" % (checked, group.backend_id))
    return 0


# ---------------------------------------------------------------------------
# dispatch


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are exit code 1, not argparse's 2
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lcmume", description=__doc__,
                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--backend", choices=["prod", "toy"], default="prod",
                    help="group backend (default prod)")
    ap.add_argument("--seed", type=int, default=None,
                    help="seed all randomness for reproducible output")
    ap.add_argument("--params", default=None, help="system parameter file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate system parameters")
    p.add_argument("--out", default="params.json")
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("keygen", help="generate a user key pair")
    p.add_argument("--id", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pub-out", default=None)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="honest multi-receiver encryption")
    p.add_argument("--sender", required=True)
    p.add_argument("--receivers", required=True,
                   help="comma-separated receiver key files")
    p.add_argument("--message", required=True, help="hex, exactly l1 bits")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="receiver decryption")
    p.add_argument("--receiver", required=True)
    p.add_argument("--sender-pk", required=True)
    p.add_argument("--ct", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("forge", help="key-replacement forgery (no sender secret)")
    p.add_argument("--sender-id", required=True)
    p.add_argument("--receivers", required=True)
    p.add_argument("--message", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--replaced-pk-out", default=None)
    p.set_defaults(func=cmd_forge)

    p = sub.add_parser("game", help="run the unforgeability experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--locked", action="store_true",
                   help="disable key replacement (control run)")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("bench", help="predicted vs measured cost table")
    p.add_argument("--n-list", default="8,16,32,64,128,256,512,1024")
    p.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("vectors", help="verify oracle test vectors")
    p.add_argument("--check", required=True, help="file of 'tag hex-in hex-out' lines")
    p.set_defaults(func=cmd_vectors)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    rng = random.Random(seed)
    try:
        return args.func(args, rng)
    except CliError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except (OSError, KeyError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
