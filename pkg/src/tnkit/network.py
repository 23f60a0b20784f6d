"""Reusable contraction blueprints parsed from a small text format.

A network file (or string) declares one tensor slot per line, a ``TOUT``
line naming the output indices, and an optional ``ORDER`` line::

    # three-matrix product
    M1: i, j
    M2: j, k
    M3: k, l
    TOUT: i ; l
    ORDER: ((M1,M2),M3)

Grammar: ``#`` starts a comment; blank lines are ignored; every other
line is ``NAME : label, label, ...``.  Names and labels use the charset
``[A-Za-z0-9_*'+-]``.  Every label must appear on exactly two slots
(contracted) or exactly one (free, and then it must be listed in TOUT).
``TOUT`` may split its labels once with ``;`` into row and column groups;
without ``;`` the first label is the row side (none for a single label).
An empty ``TOUT`` declares a scalar result.  ``ORDER`` holds a
parenthesized contraction tree over the slot names; when absent, slots
are folded left to right in order of appearance.

Bind concrete tensors with :meth:`Network.put_tensor` and run
:meth:`Network.launch`; the blueprint's labels are independent of the
labels on the bound tensors, so one blueprint is reusable across many
tensor sets.
"""

import re

from .contract import (contract_pair, find_optimal_order, parse_order,
                       render_order, tree_leaves)
from .bond import REGULAR

_TOKEN = re.compile(r"^[A-Za-z0-9_*'+\-]+$")


class Network:
    """A parsed contraction blueprint plus its current tensor bindings."""

    def __init__(self, source=None):
        self._slots = []        # (name, [labels])
        self._tout_row = []
        self._tout_col = []
        self._order = None      # contraction tree or None (appearance fold)
        self._optimal = False   # recompute the order at every launch
        self._bindings = {}     # name -> (tensor, [tensor labels])
        if source is not None:
            if isinstance(source, str) and "\n" not in source and ":" not in source:
                self.from_file(source)
            elif isinstance(source, str):
                self.from_string(source.splitlines())
            else:
                self.from_string(source)

    # -- parsing ---------------------------------------------------------

    def from_string(self, lines):
        """Parse a blueprint from a list of lines (or one multiline string)."""
        if isinstance(lines, str):
            lines = lines.splitlines()
        slots = []
        tout = None
        order_text = None
        for ln, raw in enumerate(lines, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise ValueError(f"line {ln}: expected 'NAME: labels', got {raw!r}")
            name, rhs = line.split(":", 1)
            name = name.strip()
            rhs = rhs.strip()
            if name == "TOUT":
                if tout is not None:
                    raise ValueError(f"line {ln}: duplicate TOUT")
                tout = rhs
            elif name == "ORDER":
                if order_text is not None:
                    raise ValueError(f"line {ln}: duplicate ORDER")
                order_text = rhs
            else:
                if not _TOKEN.match(name):
                    raise ValueError(f"line {ln}: bad tensor name {name!r}")
                labels = [t.strip() for t in rhs.split(",")] if rhs else []
                if not labels or any(not _TOKEN.match(t) for t in labels):
                    raise ValueError(f"line {ln}: bad label list {rhs!r}")
                slots.append((name, labels))
        if tout is None:
            raise ValueError("blueprint needs a TOUT line")
        if not slots:
            raise ValueError("blueprint declares no tensors")
        names = [n for n, _ in slots]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate slot names in {names}")
        counts = {}
        for _, labels in slots:
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate labels within one slot: {labels}")
            for l in labels:
                counts[l] = counts.get(l, 0) + 1
        bad = [l for l, c in counts.items() if c > 2]
        if bad:
            raise ValueError(f"labels {bad} appear on more than two slots")
        free = {l for l, c in counts.items() if c == 1}
        row, col = _parse_tout(tout)
        tout_labels = row + col
        if len(set(tout_labels)) != len(tout_labels):
            raise ValueError(f"duplicate labels in TOUT: {tout_labels}")
        if set(tout_labels) != free:
            raise ValueError(
                f"TOUT labels {sorted(tout_labels)} must be exactly the "
                f"free labels {sorted(free)}")
        order = None
        if order_text:
            order = parse_order(order_text)
            if sorted(tree_leaves(order)) != sorted(names):
                raise ValueError(
                    f"ORDER {order_text!r} must reference every tensor "
                    f"{names} exactly once")
        self._slots = slots
        self._tout_row = row
        self._tout_col = col
        self._order = order
        self._optimal = False
        self._bindings = {}
        return self

    def from_file(self, path):
        with open(path, encoding="utf-8") as f:
            return self.from_string(f.read().splitlines())

    def save_file(self, path):
        """Write the blueprint back out in the network file format."""
        lines = [f"{name}: {', '.join(labels)}" for name, labels in self._slots]
        row = ", ".join(self._tout_row)
        col = ", ".join(self._tout_col)
        if self._tout_row and self._tout_col:
            lines.append(f"TOUT: {row} ; {col}")
        elif self._tout_row or self._tout_col:
            lines.append(f"TOUT: {row or col}".rstrip())
        else:
            lines.append("TOUT:")
        if self._order is not None:
            lines.append(f"ORDER: {render_order(self._order)}")
        with open(path, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")

    # -- binding and launching ----------------------------------------------

    def _slot(self, name):
        for nm, labels in self._slots:
            if nm == name:
                return labels
        raise ValueError(f"no tensor named {name!r} in this network; "
                         f"slots are {[n for n, _ in self._slots]}")

    def put_tensor(self, name, tensor, labels=None):
        """Bind a tensor to a slot.

        ``labels`` lists the tensor's own labels in the order of the
        slot's abstract labels; without it the tensor's current label
        order is used.  Rebinding a slot replaces the previous binding;
        dimension consistency is checked at launch.
        """
        slot_labels = self._slot(name)
        if labels is None:
            labels = tensor.labels
        labels = list(labels)
        if len(labels) != len(slot_labels):
            raise ValueError(
                f"slot {name!r} has {len(slot_labels)} indices, got "
                f"{len(labels)} labels")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {labels}")
        missing = [l for l in labels if l not in tensor.labels]
        if missing:
            raise ValueError(f"tensor bound to {name!r} has no labels "
                             f"{missing}; its labels are {tensor.labels}")
        self._bindings[name] = (tensor, labels)
        return self

    def set_order(self, optimal=False, contract_order=None):
        """Choose the contraction order policy.

        ``optimal=True``: recompute a minimal-cost order at every launch
        (and store it).  ``optimal=False`` with ``contract_order``: fix
        the given order.  ``optimal=False`` alone: keep the stored order.
        """
        if optimal and contract_order is not None:
            raise ValueError("pass either optimal=True or an explicit order")
        if contract_order is not None:
            tree = parse_order(contract_order)
            names = [n for n, _ in self._slots]
            if sorted(tree_leaves(tree)) != sorted(names):
                raise ValueError(f"order {contract_order!r} must reference "
                                 f"every tensor {names} exactly once")
            self._order = tree
        self._optimal = bool(optimal)
        return self

    def get_order(self):
        """The stored contraction order (appearance fold if none was set)."""
        return render_order(self._order if self._order is not None
                            else self._default_order())

    def _default_order(self):
        tree = self._slots[0][0]
        for name, _ in self._slots[1:]:
            tree = (tree, name)
        return tree

    def launch(self):
        """Contract the bound tensors and return the result.

        The output's indices follow the TOUT specification (row labels
        then column labels, rowrank = number of row labels); a network
        with empty TOUT returns a rank-0 tensor.
        """
        unbound = [n for n, _ in self._slots if n not in self._bindings]
        if unbound:
            raise ValueError(f"tensors {unbound} have not been put")
        self._check_consistency()
        relabeled = {}
        for name, slot_labels in self._slots:
            tensor, order = self._bindings[name]
            news = list(tensor.labels)
            for tlabel, alabel in zip(order, slot_labels):
                news[tensor.labels.index(tlabel)] = alabel
            relabeled[name] = tensor.relabel(news).set_name(name)
        if self._optimal:
            dims = {}
            for name, slot_labels in self._slots:
                t = self._bindings[name][0]
                for a, d in zip(slot_labels, t.shape):
                    dims[a] = d
            self._order = find_optimal_order(
                {name: labels for name, labels in self._slots}, dims)
        tree = self._order if self._order is not None else self._default_order()
        out = _execute(tree, relabeled)
        tout = self._tout_row + self._tout_col
        if tout:
            out = out.permute(tout).set_rowrank(len(self._tout_row))
        return out

    def _check_consistency(self):
        """Dimensions, directions and sectors must agree across slots."""
        seen = {}  # abstract label -> (slot name, bond)
        for name, slot_labels in self._slots:
            tensor, order = self._bindings[name]
            for tlabel, alabel in zip(order, slot_labels):
                bond = tensor.bond(tlabel)
                if alabel not in seen:
                    seen[alabel] = (name, bond)
                    continue
                oname, obond = seen[alabel]
                if bond.dim != obond.dim:
                    raise ValueError(
                        f"index {alabel!r}: dimension {obond.dim} on slot "
                        f"{oname!r} vs {bond.dim} on slot {name!r}")
                if (bond.btype == REGULAR) != (obond.btype == REGULAR):
                    raise ValueError(
                        f"index {alabel!r}: REGULAR bond on one of slots "
                        f"{oname!r}/{name!r} but directed on the other")
                if bond.btype != REGULAR and bond.btype == obond.btype:
                    raise ValueError(
                        f"index {alabel!r}: slots {oname!r} and {name!r} "
                        f"both have {bond.btype} bonds; directions must "
                        f"be opposite")
                if bond.has_qnums and bond.sectors != obond.sectors:
                    raise ValueError(
                        f"index {alabel!r}: quantum-number sectors differ "
                        f"between slots {oname!r} and {name!r}")

    # -- comparison and display --------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (self._slots == other._slots
                and self._tout_row == other._tout_row
                and self._tout_col == other._tout_col
                and self._order == other._order)

    def __str__(self):
        lines = ["==== Network ===="]
        for name, labels in self._slots:
            mark = "x" if name in self._bindings else " "
            lines.append(f"[{mark}] {name} : {' '.join(labels)}")
        lines.append(f"TOUT : {' '.join(self._tout_row)} ; "
                     f"{' '.join(self._tout_col)}")
        lines.append(f"ORDER : {self.get_order()}")
        lines.append("=================")
        return "\n".join(lines)

    def __repr__(self):
        return (f"<Network slots={[n for n, _ in self._slots]} "
                f"tout={self._tout_row}+{self._tout_col}>")


def _execute(tree, tensors):
    if isinstance(tree, str):
        return tensors[tree]
    return contract_pair(_execute(tree[0], tensors), _execute(tree[1], tensors))


def _parse_tout(text):
    text = text.strip()
    if not text:
        return [], []
    if ";" in text:
        row_text, col_text = text.split(";", 1)
        if ";" in col_text:
            raise ValueError(f"TOUT may contain at most one ';': {text!r}")
        row = _label_list(row_text)
        col = _label_list(col_text)
    else:
        labels = _label_list(text)
        if len(labels) >= 2:
            row, col = labels[:1], labels[1:]
        else:
            row, col = [], labels
    return row, col


def _label_list(text):
    text = text.strip()
    if not text:
        return []
    toks = [t.strip() for t in text.split(",")]
    if any(not _TOKEN.match(t) for t in toks):
        raise ValueError(f"bad label list {text!r}")
    return toks
