"""SDPA sparse (``.dat-s``) export and import for relaxed :class:`SdpModel` objects.

SDPA solves ``min c'x  s.t.  sum_s F_s x_s - F_0 >= 0``.  A block
``C + sum_s A_s x_s`` becomes ``F_0 = -C`` and ``F_s = A_s``.  Scalar bounds
go into one trailing diagonal (LP) block: ``x_s >= L`` is the entry
``F_s = 1, F_0 = L`` and ``x_s <= U`` is ``F_s = -1, F_0 = -U``.

Leading ``*`` comment lines carry what SDPA has no slot for: the model name,
``k``, the objective constant, the graph edge behind each scalar and the
vertex labels of each block.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from ._numbers import format_number
from .exceptions import ModelFormatError
from .models import Scalar, SdpBlock, SdpModel


def _entries(model: SdpModel):
    """(matno, blkno, i, j, value) sorted; zero values dropped."""
    out = []
    for b, block in enumerate(model.blocks, start=1):
        for (i, j), v in block.constant.items():
            out.append((0, b, i, j, -v))
        for s, entries in block.terms.items():
            for (i, j), v in entries.items():
                out.append((s + 1, b, i, j, v))
    bound_block = len(model.blocks) + 1
    row = 0
    for s, scalar in enumerate(model.scalars):
        if scalar.lower is not None:
            row += 1
            out.append((s + 1, bound_block, row, row, Fraction(1)))
            out.append((0, bound_block, row, row, scalar.lower))
        if scalar.upper is not None:
            row += 1
            out.append((s + 1, bound_block, row, row, Fraction(-1)))
            out.append((0, bound_block, row, row, -scalar.upper))
    return sorted(e for e in out if e[4] != 0), row


def emit_sdpa(model: SdpModel) -> str:
    if not model.relaxed:
        raise ValueError(
            "integer-mode SDP models cannot be written as SDPA; build with relax=True"
        )
    entries, n_bounds = _entries(model)
    struct = [str(b.dim) for b in model.blocks]
    if n_bounds:
        struct.append(str(-n_bounds))
    lines = [f"* mkp model {model.name} k {model.k}", f"* offset {format_number(model.offset)}"]
    lines.append("* scalars " + " ".join(f"{i}-{j}" for i, j in (s.edge for s in model.scalars)))
    for b, block in enumerate(model.blocks, start=1):
        lines.append(f"* block {b} " + " ".join(map(str, block.vertices)))
    lines.append(str(len(model.scalars)))
    lines.append(str(len(struct)))
    lines.append(" ".join(struct))
    lines.append(" ".join(format_number(model.objective.get(s, 0)) for s in range(len(model.scalars))))
    lines += [f"{m} {b} {i} {j} {format_number(v)}" for m, b, i, j, v in entries]
    return "\n".join(lines) + "\n"


def _numbers(line, lineno):
    cleaned = line
    for ch in ",{}()":
        cleaned = cleaned.replace(ch, " ")
    try:
        return [Fraction(tok) for tok in cleaned.split()]
    except ValueError:
        raise ModelFormatError(f"expected numbers in {line!r}", lineno) from None


def parse_sdpa(text: str) -> SdpModel:
    name, k, offset = "model", 0, Fraction(0)
    edges = None
    labels = {}
    data = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line[0] in "*\"":
            if data:
                raise ModelFormatError("comment after data", lineno)
            words = line[1:].split()
            if words[:2] == ["mkp", "model"] and len(words) >= 5:
                name, k = words[2], int(words[4])
            elif words[:1] == ["offset"] and len(words) == 2:
                offset = Fraction(words[1])
            elif words[:1] == ["scalars"]:
                edges = [tuple(int(x) for x in w.split("-")) for w in words[1:]]
            elif words[:1] == ["block"] and len(words) >= 2:
                labels[int(words[1])] = tuple(int(x) for x in words[2:])
            continue
        data.append((lineno, line))
    if len(data) < 4:
        raise ModelFormatError("truncated SDPA header")
    m_dim = _numbers(data[0][1], data[0][0])
    n_block = _numbers(data[1][1], data[1][0])
    if len(m_dim) != 1 or len(n_block) != 1:
        raise ModelFormatError("mDim and nBlock lines hold one integer each", data[0][0])
    m, nb = int(m_dim[0]), int(n_block[0])
    struct = [int(x) for x in _numbers(data[2][1], data[2][0])]
    if len(struct) != nb:
        raise ModelFormatError(f"blockStruct lists {len(struct)} blocks, expected {nb}", data[2][0])
    cost = _numbers(data[3][1], data[3][0])
    if len(cost) != m:
        raise ModelFormatError(f"cost vector has {len(cost)} entries, expected {m}", data[3][0])
    if edges is None:
        edges = [(0, s + 1) for s in range(m)]
    if len(edges) != m:
        raise ModelFormatError("scalar comment does not match mDim")

    psd = [b for b in range(1, nb + 1) if struct[b - 1] > 0]
    lp = [b for b in range(1, nb + 1) if struct[b - 1] < 0]
    if len(lp) > 1:
        raise ModelFormatError("at most one diagonal bound block is supported")
    blocks = {
        b: SdpBlock(labels.get(b, tuple(range(1, struct[b - 1] + 1))), {}, {}) for b in psd
    }
    bound_rows = defaultdict(dict)
    for lineno, line in data[4:]:
        nums = _numbers(line, lineno)
        if len(nums) != 5:
            raise ModelFormatError("entry lines are 'matno blkno i j value'", lineno)
        mat, b, i, j = (int(x) for x in nums[:4])
        v = nums[4]
        if not (0 <= mat <= m and 1 <= b <= nb):
            raise ModelFormatError("matrix or block number out of range", lineno)
        if i > j:
            i, j = j, i
        size = abs(struct[b - 1])
        if not (1 <= i <= size and 1 <= j <= size):
            raise ModelFormatError("entry outside its block", lineno)
        if b in blocks:
            if mat == 0:
                blocks[b].constant[(i, j)] = -v
            else:
                blocks[b].terms.setdefault(mat - 1, {})[(i, j)] = v
        else:
            if i != j:
                raise ModelFormatError("off-diagonal entry in a diagonal block", lineno)
            bound_rows[i][mat] = v

    scalars = [Scalar(e) for e in edges]
    for row in sorted(bound_rows):
        entry = bound_rows[row]
        owners = [mat for mat in entry if mat != 0]
        if len(owners) != 1 or entry[owners[0]] not in (1, -1):
            raise ModelFormatError(f"bound row {row} is not a simple variable bound")
        s = owners[0] - 1
        rhs = entry.get(0, Fraction(0))
        if entry[owners[0]] == 1:
            scalars[s].lower = rhs
        else:
            scalars[s].upper = -rhs
    return SdpModel(
        name=name,
        k=k,
        scalars=scalars,
        blocks=[blocks[b] for b in psd],
        objective={s: c for s, c in enumerate(cost) if c != 0},
        offset=offset,
    )
