"""Command-line surface and the binary key/ciphertext file format.

File layout (little-endian multi-byte integers):

    offset  size  field
    0       4     magic "TDP1"
    4       1     record type: 1 setup, 2 private, 3 token, 4 session key,
                  5 ciphertext
    5       2     prime (u16)
    7       1     dimension
    8       1     role: 0 none, 1 alice, 2 bob
    9       4     matrix count (u32)
    13      ...   type 2 only: eigenvalue lists (count byte, then d bytes each)
                  type 5 only: plaintext length (u64)
    ...     n*d*d matrices, row-major, one byte per entry (requires p <= 251)

Entries must be < p and the file length is fully determined by the header;
anything else is rejected.  Files are written to a temp name and renamed, so
a crashed run never leaves a partial file.

Exit codes: 0 success, 2 bad flags or parameters, 3 file-format violation,
4 parameter mismatch between files, 5 decryption range failure (wrong key).
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import numpy as np

from . import analysis, poly_tools
from .cipher import CipherBlock, CipherMessage, bytes_per_block, decrypt_message, encrypt_message
from .errors import (
    FactorizationError,
    FileFormatError,
    ParamsMismatchError,
    SearchSpaceTooLargeError,
    ValueOutOfRangeError,
)
from .field_matrix import DiagonalSpec, FieldParams, Matrix, SplitMix64
from .protocol import (
    AlicePrivate,
    BobPrivate,
    PublicSetup,
    PublicToken,
    Role,
    SessionKey,
    alice_keygen,
    alice_shared,
    alice_token,
    bob_keygen,
    bob_shared,
    bob_token,
    gen_setup,
)

MAGIC = b"TDP1"
REC_SETUP = 1
REC_PRIVATE = 2
REC_TOKEN = 3
REC_SESSION_KEY = 4
REC_CIPHERTEXT = 5

_ROLE_TO_CODE = {None: 0, Role.ALICE: 1, Role.BOB: 2}
_CODE_TO_ROLE = {0: None, 1: Role.ALICE, 2: Role.BOB}


# ---------------------------------------------------------------------------
# binary records
# ---------------------------------------------------------------------------

def _check_file_params(params: FieldParams) -> None:
    if params.p > 251:
        raise ValueError("prime must be <= 251 for the one-byte-per-entry file format")


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tdp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _pack_record(
    record_type: int,
    params: FieldParams,
    role: Role | None,
    matrices: list[Matrix],
    specs: list[DiagonalSpec] | None = None,
    plaintext_length: int | None = None,
) -> bytes:
    _check_file_params(params)
    out = bytearray()
    out += MAGIC
    out.append(record_type)
    out += params.p.to_bytes(2, "little")
    out.append(params.d)
    out.append(_ROLE_TO_CODE[role])
    out += len(matrices).to_bytes(4, "little")
    if record_type == REC_PRIVATE:
        out.append(len(specs))
        for spec in specs:
            out += bytes(spec.eigenvalues)
    if record_type == REC_CIPHERTEXT:
        out += plaintext_length.to_bytes(8, "little")
    for m in matrices:
        out += m.a.astype(np.uint8).tobytes()
    return bytes(out)


class _Record:
    def __init__(self, record_type, params, role, matrices, specs, plaintext_length):
        self.record_type = record_type
        self.params = params
        self.role = role
        self.matrices = matrices
        self.specs = specs
        self.plaintext_length = plaintext_length


def _parse_record(data: bytes, path: str) -> _Record:
    def fail(reason: str):
        raise FileFormatError(f"{path}: {reason}")

    if len(data) < 13:
        fail("truncated header")
    if data[:4] != MAGIC:
        fail("bad magic")
    record_type = data[4]
    if record_type not in (REC_SETUP, REC_PRIVATE, REC_TOKEN, REC_SESSION_KEY, REC_CIPHERTEXT):
        fail(f"unknown record type {record_type}")
    p = int.from_bytes(data[5:7], "little")
    d = data[7]
    try:
        params = FieldParams(p=p, d=d)
    except ValueError as exc:
        fail(str(exc))
    if p > 251:
        fail("prime too large for one-byte entries")
    role_code = data[8]
    if role_code not in _CODE_TO_ROLE:
        fail(f"unknown role code {role_code}")
    role = _CODE_TO_ROLE[role_code]
    count = int.from_bytes(data[9:13], "little")
    pos = 13
    specs = None
    plaintext_length = None
    if record_type == REC_PRIVATE:
        if len(data) < pos + 1:
            fail("truncated eigenvalue section")
        n_specs = data[pos]
        pos += 1
        specs = []
        for _ in range(n_specs):
            chunk = data[pos:pos + d]
            if len(chunk) < d:
                fail("truncated eigenvalue list")
            if any(v == 0 or v >= p for v in chunk):
                fail("eigenvalue outside [1, p-1]")
            specs.append(DiagonalSpec(params, tuple(chunk)))
            pos += d
    if record_type == REC_CIPHERTEXT:
        if len(data) < pos + 8:
            fail("truncated length field")
        plaintext_length = int.from_bytes(data[pos:pos + 8], "little")
        pos += 8
    expected_len = pos + count * d * d
    if len(data) != expected_len:
        fail(f"length {len(data)} does not match header (expected {expected_len})")
    matrices = []
    for i in range(count):
        chunk = np.frombuffer(data[pos:pos + d * d], dtype=np.uint8).astype(np.int64)
        pos += d * d
        if (chunk >= p).any():
            fail(f"matrix {i} has an entry >= p")
        matrices.append(Matrix(params, chunk.reshape(d, d)))
    return _Record(record_type, params, role, matrices, specs, plaintext_length)


def _read_record(path: str, expect_type: int) -> _Record:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    rec = _parse_record(data, path)
    names = {1: "setup", 2: "private key", 3: "token", 4: "session key", 5: "ciphertext"}
    if rec.record_type != expect_type:
        raise FileFormatError(
            f"{path}: is a {names[rec.record_type]} record, expected {names[expect_type]}"
        )
    return rec


def write_setup_file(path: str, setup: PublicSetup) -> None:
    data = _pack_record(REC_SETUP, setup.params, None, [setup.P, setup.Q, setup.R, setup.S])
    _atomic_write(path, data)


def read_setup_file(path: str) -> PublicSetup:
    rec = _read_record(path, REC_SETUP)
    if len(rec.matrices) != 4:
        raise FileFormatError(f"{path}: setup needs 4 matrices, found {len(rec.matrices)}")
    try:
        return PublicSetup(rec.params, *rec.matrices)
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def write_private_file(path: str, priv: AlicePrivate | BobPrivate) -> None:
    s = priv.setup
    if isinstance(priv, AlicePrivate):
        role = Role.ALICE
        specs = [priv.d_a2, priv.d_a3, priv.d_x1, priv.d_x2]
        own = [priv.a1, priv.a2, priv.a3, priv.x1, priv.x2]
    else:
        role = Role.BOB
        specs = [priv.d_b1, priv.d_b2, priv.d_y1, priv.d_y2]
        own = [priv.b1, priv.b2, priv.b3, priv.y1, priv.y2]
    matrices = [s.P, s.Q, s.R, s.S] + own
    _atomic_write(path, _pack_record(REC_PRIVATE, s.params, role, matrices, specs=specs))


def read_private_file(path: str) -> AlicePrivate | BobPrivate:
    rec = _read_record(path, REC_PRIVATE)
    if rec.role is None:
        raise FileFormatError(f"{path}: private record carries no role")
    if len(rec.matrices) != 9 or len(rec.specs) != 4:
        raise FileFormatError(f"{path}: private record needs 9 matrices and 4 eigenvalue lists")
    try:
        setup = PublicSetup(rec.params, *rec.matrices[:4])
        m = rec.matrices
        if rec.role is Role.ALICE:
            return AlicePrivate(setup, *rec.specs, m[4], m[5], m[6], m[7], m[8])
        return BobPrivate(setup, *rec.specs, m[4], m[5], m[6], m[7], m[8])
    except ValueError as exc:
        raise FileFormatError(f"{path}: inconsistent private material: {exc}") from exc


def write_token_file(path: str, token: PublicToken) -> None:
    data = _pack_record(
        REC_TOKEN, token.params, token.role, [token.t1, token.t2, token.t3]
    )
    _atomic_write(path, data)


def read_token_file(path: str) -> PublicToken:
    rec = _read_record(path, REC_TOKEN)
    if rec.role is None:
        raise FileFormatError(f"{path}: token record carries no role")
    if len(rec.matrices) != 3:
        raise FileFormatError(f"{path}: token needs 3 matrices, found {len(rec.matrices)}")
    return PublicToken(rec.role, *rec.matrices)


def write_session_key_file(path: str, key: SessionKey) -> None:
    _atomic_write(path, _pack_record(REC_SESSION_KEY, key.k.params, None, [key.k]))


def read_session_key_file(path: str) -> SessionKey:
    rec = _read_record(path, REC_SESSION_KEY)
    if len(rec.matrices) != 1:
        raise FileFormatError(f"{path}: session key needs 1 matrix, found {len(rec.matrices)}")
    try:
        return SessionKey(rec.matrices[0])
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def write_ciphertext_file(path: str, message: CipherMessage) -> None:
    data = _pack_record(
        REC_CIPHERTEXT,
        message.params,
        None,
        [b.c for b in message.blocks],
        plaintext_length=message.plaintext_length,
    )
    _atomic_write(path, data)


def read_ciphertext_file(path: str) -> CipherMessage:
    rec = _read_record(path, REC_CIPHERTEXT)
    bpb = bytes_per_block(rec.params)
    expected = (rec.plaintext_length + bpb - 1) // bpb if rec.plaintext_length else 0
    if len(rec.matrices) != expected:
        raise FileFormatError(
            f"{path}: {len(rec.matrices)} blocks inconsistent with length {rec.plaintext_length}"
        )
    blocks = tuple(CipherBlock(m) for m in rec.matrices)
    return CipherMessage(rec.params, rec.plaintext_length, blocks)


# ---------------------------------------------------------------------------
# report formatting
# ---------------------------------------------------------------------------

def _sci(n: int) -> str:
    s = str(n)
    if len(s) <= 16:
        return s
    return f"{s[0]}.{s[1:16]}e{len(s) - 1}"


def _emit(pairs: list[tuple[str, str]], fmt: str) -> None:
    if fmt == "kv":
        for k, v in pairs:
            print(f"{k}={v}")
    else:
        width = max(len(k) for k, _ in pairs)
        for k, v in pairs:
            print(f"{k:<{width}}  {v}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _params_from_args(args) -> FieldParams:
    try:
        return FieldParams(p=args.prime, d=args.dim)
    except ValueError as exc:
        raise ValueError(f"invalid parameters: {exc}") from exc


def cmd_params(args) -> int:
    params = _params_from_args(args)
    ks = analysis.keyspace_size(params)
    exact = args.format == "kv"
    fmt_int = str if exact else _sci
    pairs = [
        ("prime", str(params.p)),
        ("dim", str(params.d)),
        ("total_matrices", fmt_int(poly_tools.matrix_space_size(params))),
        ("gl_order", fmt_int(poly_tools.gl_order(params))),
        ("singular_count", fmt_int(poly_tools.singular_count(params))),
        ("nilpotent_count", fmt_int(poly_tools.nilpotent_count(params))),
        ("irreducible_polynomials", fmt_int(poly_tools.count_irreducible(params.d, params.p))),
        ("keyspace_p_minus_2", fmt_int(ks.restricted)),
        ("keyspace_p_minus_1", fmt_int(ks.nonzero)),
        ("classical_bits_p_minus_2", f"{ks.restricted_bits:.2f}"),
        ("classical_bits_p_minus_1", f"{ks.nonzero_bits:.2f}"),
        ("quantum_bits_p_minus_2", f"{ks.restricted_quantum_bits:.2f}"),
        ("quantum_bits_p_minus_1", f"{ks.nonzero_quantum_bits:.2f}"),
    ]
    _emit(pairs, args.format)
    return 0


def _seed_from_args(args) -> int:
    if args.seed is not None:
        return args.seed
    return int.from_bytes(os.urandom(8), "little")


def cmd_setup(args) -> int:
    params = _params_from_args(args)
    _check_file_params(params)
    rs = SplitMix64(_seed_from_args(args))
    write_setup_file(args.out, gen_setup(rs, params))
    return 0


def cmd_keygen(args) -> int:
    setup = read_setup_file(args.infile)
    rs = SplitMix64(_seed_from_args(args))
    if args.role == "alice":
        priv = alice_keygen(rs, setup)
    else:
        priv = bob_keygen(rs, setup)
    write_private_file(args.out, priv)
    return 0


def cmd_token(args) -> int:
    priv = read_private_file(args.key)
    token = alice_token(priv) if isinstance(priv, AlicePrivate) else bob_token(priv)
    write_token_file(args.out, token)
    return 0


def cmd_shared(args) -> int:
    priv = read_private_file(args.key)
    token = read_token_file(args.peer)
    if token.params != priv.setup.params:
        raise ParamsMismatchError(
            f"{args.peer}: token parameters {token.params} differ from private key"
        )
    if isinstance(priv, AlicePrivate):
        key = alice_shared(priv, token)
    else:
        key = bob_shared(priv, token)
    write_session_key_file(args.out, key)
    return 0


def cmd_encrypt(args) -> int:
    key = read_session_key_file(args.key)
    try:
        with open(args.infile, "rb") as fh:
            plaintext = fh.read()
    except OSError as exc:
        raise ValueError(f"cannot read {args.infile}: {exc}") from exc
    write_ciphertext_file(args.out, encrypt_message(key, plaintext))
    return 0


def cmd_decrypt(args) -> int:
    key = read_session_key_file(args.key)
    message = read_ciphertext_file(args.infile)
    if message.params != key.k.params:
        raise ParamsMismatchError(f"{args.infile}: ciphertext parameters differ from key")
    plaintext = decrypt_message(key, message)
    _atomic_write(args.out, plaintext)
    return 0


def cmd_stats(args) -> int:
    if args.sessions < 1:
        raise ValueError("--sessions must be >= 1")
    params = _params_from_args(args)
    rs = SplitMix64(_seed_from_args(args))
    st = analysis.session_statistics(rs, params, args.sessions)
    pairs = [
        ("sessions", str(st.sessions)),
        ("agreement", f"{st.agreements}/{st.sessions}"),
        ("roundtrip", f"{st.roundtrips}/{st.sessions}"),
        ("mean_session_ms", f"{st.mean_seconds * 1000:.3f}"),
        ("candidate_draws", str(st.candidate_draws)),
        ("singular_redraws", str(st.singular_redraws)),
        ("redraw_rate", f"{st.redraw_rate:.5f}"),
        ("regenerations", str(st.regenerations)),
    ]
    if st.cipher_blocks:
        matrices = [b.c for b in st.cipher_blocks]
        try:
            rep = analysis.uniformity_stats(matrices)
            pairs += [
                ("chi_square", f"{rep.chi_square:.2f}"),
                ("dof", str(rep.dof)),
                ("p_value", f"{rep.p_value:.4f}"),
                ("uniformity", "PASS" if rep.passed else "FAIL"),
            ]
        except Exception as exc:  # too few samples for tiny runs
            pairs.append(("uniformity", f"SKIPPED ({exc})"))
        leak_all = all(
            analysis.similarity_leak_check(m, c).all_equal
            for m, c in zip(st.plain_blocks, st.cipher_blocks)
        )
        pairs.append(("leak", f"trace/det/charpoly preserved: {'yes' if leak_all else 'NO'}"))
    _emit(pairs, args.format)
    return 0


def cmd_attack(args) -> int:
    params = _params_from_args(args)
    space = (params.p - 1) ** (2 * params.d)
    if space > 10_000_000:
        raise ValueError(
            f"search space {space} exceeds the 10^7 toy-scale bound; use smaller --prime/--dim"
        )
    rs = SplitMix64(_seed_from_args(args))
    from .protocol import run_session

    result = run_session(rs, params)
    pk = analysis.brute_force_pseudo_key(
        result.setup, result.alice_pub, result.bob_pub, result.alice_key
    )
    ok = analysis.pseudo_key_reproduces(pk, result.alice_pub, result.bob_pub, result.alice_key)
    pairs = [
        ("prime", str(params.p)),
        ("dim", str(params.d)),
        ("search space", str(space)),
        ("candidates tested", str(pk.candidates_tested)),
    ]
    _emit(pairs, args.format)
    if args.format == "kv":
        print(f"reproduces={'yes' if ok else 'no'}")
    else:
        print(f"pseudo-key reproduces session key: {'yes' if ok else 'NO'}")
        for name, m in (("x1'", pk.x1), ("x2'", pk.x2), ("a1'", pk.a1), ("a2'", pk.a2), ("a3'", pk.a3)):
            print(f"{name} =")
            print(m.a)
    return 0


def cmd_irreducible(args) -> int:
    if args.degree < 1:
        raise ValueError("--degree must be >= 1")
    try:
        FieldParams(p=args.prime, d=max(2, args.degree))
    except ValueError as exc:
        raise ValueError(f"invalid parameters: {exc}") from exc
    rs = SplitMix64(_seed_from_args(args))
    f, trials = poly_tools.random_irreducible(rs, args.degree, args.prime)
    print(f"prime {args.prime}")
    print(f"degree {args.degree}")
    print(f"polynomial {f}")
    print(f"trials {trials}")
    if args.degree >= 2:
        comp = poly_tools.companion_matrix(f)
        print("companion matrix =")
        print(comp.a)
        group_order = args.prime ** args.degree - 1
        try:
            factorization = poly_tools.trial_division_factorization(group_order)
        except FactorizationError:
            print("order unknown (trial-division budget exceeded)")
            return 0
        order = poly_tools.element_order(comp, factorization)
        print(f"order {order}")
        print(f"primitive: {'yes' if order == group_order else 'no'}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def _add_common_params(sub, prime_default=251, dim_default=8):
    sub.add_argument("--prime", type=int, default=prime_default)
    sub.add_argument("--dim", type=int, default=dim_default)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdpkex",
        description="Key agreement over GL(d, F_p) by triple decomposition, "
        "with a conjugation cipher and an analysis toolkit.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("params", help="group cardinalities and keyspace sizes")
    _add_common_params(s)
    s.add_argument("--format", choices=["text", "kv"], default="text")
    s.set_defaults(func=cmd_params)

    s = subs.add_parser("setup", help="generate the four public bases")
    _add_common_params(s)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_setup)

    s = subs.add_parser("keygen", help="generate a private key from a setup file")
    s.add_argument("--in", dest="infile", required=True, help="setup file")
    s.add_argument("--role", choices=["alice", "bob"], required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_keygen)

    s = subs.add_parser("token", help="derive the public token from a private key")
    s.add_argument("--key", required=True, help="own private key file")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_token)

    s = subs.add_parser("shared", help="derive the shared session key")
    s.add_argument("--key", required=True, help="own private key file")
    s.add_argument("--peer", required=True, help="peer token file")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_shared)

    s = subs.add_parser("encrypt", help="encrypt a file under a session key")
    s.add_argument("--key", required=True, help="session key file")
    s.add_argument("--in", dest="infile", required=True, help="plaintext file")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_encrypt)

    s = subs.add_parser("decrypt", help="decrypt a ciphertext file")
    s.add_argument("--key", required=True, help="session key file")
    s.add_argument("--in", dest="infile", required=True, help="ciphertext file")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_decrypt)

    s = subs.add_parser("stats", help="run seeded sessions and report statistics")
    _add_common_params(s)
    s.add_argument("--sessions", type=int, default=1000)
    s.add_argument("--seed", type=int)
    s.add_argument("--format", choices=["text", "kv"], default="text")
    s.set_defaults(func=cmd_stats)

    s = subs.add_parser("attack", help="exhaustive pseudo-key recovery at toy parameters")
    _add_common_params(s, prime_default=5, dim_default=2)
    s.add_argument("--seed", type=int)
    s.add_argument("--format", choices=["text", "kv"], default="text")
    s.set_defaults(func=cmd_attack)

    s = subs.add_parser("irreducible", help="draw a random irreducible polynomial")
    s.add_argument("--prime", type=int, default=251)
    s.add_argument("--degree", type=int, default=8)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_irreducible)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ParamsMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueOutOfRangeError as exc:
        print(f"error: decryption failed: {exc}", file=sys.stderr)
        return 5
    except (ValueError, SearchSpaceTooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
