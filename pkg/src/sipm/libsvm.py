"""Parser and serializer for the sparse LIBSVM text format.

Each nonempty line is ``label index:value index:value ...`` with 1-based,
strictly increasing feature indices.  Blank lines and lines starting with
'#' are skipped.  Parsing is single pass and keeps memory proportional to
the number of nonzeros.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import LabelMismatch, MalformedLine, NonIncreasingIndex, NotBinary


@dataclass(frozen=True)
class SparseDataset:
    """Rows of (index, value) pairs with raw labels and a feature count.

    ``label_order`` pins the raw-label to -1/+1 mapping; it is normally set
    by align_feature_space so a test split inherits the training mapping.
    """

    rows: tuple
    labels: tuple
    n_features: int
    label_order: tuple | None = None

    @property
    def m(self):
        return len(self.rows)

    def label_values(self):
        return tuple(sorted(set(self.labels)))

    def dense_features(self):
        """Materialize the rows as a dense (m, n_features) array."""
        out = np.zeros((self.m, self.n_features))
        for r, row in enumerate(self.rows):
            for idx, val in row:
                out[r, idx - 1] = val
        return out

    def to_arrays(self):
        """Dense features plus labels mapped to -1/+1 by sorted raw value."""
        order = self.label_order if self.label_order is not None else self.label_values()
        if len(order) != 2:
            raise NotBinary(f"need exactly two label values to train, got {len(order)}")
        mapping = {order[0]: -1.0, order[1]: 1.0}
        try:
            y = np.array([mapping[lab] for lab in self.labels])
        except KeyError as err:
            raise LabelMismatch(f"label {err.args[0]} not in mapping {order}") from None
        return self.dense_features(), y


def parse_libsvm(source, n_features=None):
    """Parse LIBSVM text into a SparseDataset.

    ``source`` may be a string of text or any iterable of lines.  The feature
    count defaults to the largest index seen; an explicit ``n_features`` can
    only widen it.  More than two distinct labels raises NotBinary (a single
    label value is allowed so test splits remain parseable).
    """
    lines = source.splitlines() if isinstance(source, str) else source
    rows = []
    labels = []
    max_index = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        try:
            label = float(tokens[0])
        except ValueError:
            raise MalformedLine(lineno, f"label {tokens[0]!r} is not numeric") from None
        row = []
        prev = 0
        for token in tokens[1:]:
            left, sep, right = token.partition(":")
            if not sep:
                raise MalformedLine(lineno, f"token {token!r} is missing a colon")
            try:
                index = int(left)
            except ValueError:
                raise MalformedLine(lineno, f"index {left!r} is not an integer") from None
            if index <= 0:
                raise MalformedLine(lineno, f"index {index} is not positive")
            try:
                value = float(right)
            except ValueError:
                raise MalformedLine(lineno, f"value {right!r} is not numeric") from None
            if index <= prev:
                raise NonIncreasingIndex(lineno)
            prev = index
            row.append((index, value))
        max_index = max(max_index, prev)
        rows.append(tuple(row))
        labels.append(label)
    distinct = sorted(set(labels))
    if len(distinct) > 2:
        raise NotBinary(f"found {len(distinct)} distinct labels, expected at most 2")
    width = max(max_index, n_features or 0)
    return SparseDataset(rows=tuple(rows), labels=tuple(labels), n_features=width)


def parse_libsvm_file(path, n_features=None):
    with open(path, "r", encoding="ascii") as handle:
        return parse_libsvm(handle, n_features=n_features)


def _fmt(value):
    # integers print bare so round-trips stay byte-stable and familiar
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def serialize_libsvm(dataset):
    """Render a SparseDataset back to LIBSVM text (exact float round-trip)."""
    lines = []
    for label, row in zip(dataset.labels, dataset.rows):
        parts = [_fmt(label)] + [f"{idx}:{_fmt(val)}" for idx, val in row]
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def align_feature_space(train, test):
    """Put a train/test pair on a common feature count and label mapping.

    The label mapping is fixed by the training labels (which must hold
    exactly two values) and applied to the test split; a test label absent
    from the training set raises LabelMismatch.
    """
    order = train.label_values()
    if len(order) != 2:
        raise NotBinary(f"training data must carry two label values, got {len(order)}")
    stray = set(test.labels) - set(order)
    if stray:
        raise LabelMismatch(f"test labels {sorted(stray)} never occur in training data")
    width = max(train.n_features, test.n_features)
    return (replace(train, n_features=width, label_order=order),
            replace(test, n_features=width, label_order=order))
