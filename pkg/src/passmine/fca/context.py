"""Formal contexts and their derivation operators.

A formal context pairs a set of objects with a set of attributes through a
boolean incidence relation.  Here the objects are players initiating passes
and the attributes describe receptions, but nothing in this module knows
about soccer: it is a generic, immutable binary context with the two prime
(derivation) operators and their composition, the closure operator.

Attribute sets are packed into int bitmasks over the context's attribute
order.  That keeps the closure kernel cheap enough to enumerate the many
thousands of closed and pseudo-closed sets the basis computation visits.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass


@dataclass(frozen=True)
class AttributeSet:
    """A set of attribute indices, packed as an int bitmask (bit i = index i).

    Iteration always yields indices in ascending order, which is also the
    canonical order everywhere a set is rendered or serialized.
    """

    mask: int = 0

    def __post_init__(self) -> None:
        if self.mask < 0:
            raise ValueError("attribute-set mask must be non-negative")

    @classmethod
    def of(cls, indices: Iterable[int]) -> AttributeSet:
        mask = 0
        for i in indices:
            if i < 0:
                raise ValueError(f"attribute index must be non-negative, got {i}")
            mask |= 1 << i
        return cls(mask)

    def indices(self) -> tuple[int, ...]:
        return tuple(self)

    def issubset(self, other: AttributeSet) -> bool:
        return self.mask & ~other.mask == 0

    def __iter__(self):
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, index: int) -> bool:
        return index >= 0 and (self.mask >> index) & 1 == 1

    def __le__(self, other: AttributeSet) -> bool:
        return self.issubset(other)

    def __lt__(self, other: AttributeSet) -> bool:
        return self.mask != other.mask and self.issubset(other)

    def __or__(self, other: AttributeSet) -> AttributeSet:
        return AttributeSet(self.mask | other.mask)

    def __and__(self, other: AttributeSet) -> AttributeSet:
        return AttributeSet(self.mask & other.mask)

    def __sub__(self, other: AttributeSet) -> AttributeSet:
        return AttributeSet(self.mask & ~other.mask)


class FormalContext:
    """Immutable object-by-attribute boolean incidence with named rows/columns.

    ``objects`` and ``attributes`` are ordered label tuples; ``incidence`` is
    read row-major: cell (g, m) is true iff object g has attribute m.  Labels
    must be pairwise distinct within each axis.  Instances never change after
    construction, so they are safe to share across threads.
    """

    __slots__ = ("_objects", "_attributes", "_rows", "_cols", "_name",
                 "_obj_index", "_attr_index", "_full_attr_mask", "_full_obj_mask")

    def __init__(
        self,
        objects: Iterable[str],
        attributes: Iterable[str],
        incidence: Sequence[Sequence[object]],
        *,
        name: str = "",
    ) -> None:
        objs = tuple(str(o) for o in objects)
        attrs = tuple(str(a) for a in attributes)
        if len(set(objs)) != len(objs):
            raise ValueError("object labels must be pairwise distinct")
        if len(set(attrs)) != len(attrs):
            raise ValueError("attribute labels must be pairwise distinct")
        incidence = tuple(tuple(bool(c) for c in row) for row in incidence)
        if len(incidence) != len(objs):
            raise ValueError(f"incidence has {len(incidence)} rows for {len(objs)} objects")
        for g, row in enumerate(incidence):
            if len(row) != len(attrs):
                raise ValueError(
                    f"incidence row {g} has {len(row)} cells for {len(attrs)} attributes"
                )

        rows = []
        for row in incidence:
            mask = 0
            for m, cell in enumerate(row):
                if cell:
                    mask |= 1 << m
            rows.append(mask)
        cols = []
        for m in range(len(attrs)):
            mask = 0
            bit = 1 << m
            for g, row_mask in enumerate(rows):
                if row_mask & bit:
                    mask |= 1 << g
            cols.append(mask)

        self._objects = objs
        self._attributes = attrs
        self._rows = tuple(rows)
        self._cols = tuple(cols)
        self._name = name
        self._obj_index = {label: g for g, label in enumerate(objs)}
        self._attr_index = {label: m for m, label in enumerate(attrs)}
        self._full_attr_mask = (1 << len(attrs)) - 1
        self._full_obj_mask = (1 << len(objs)) - 1

    @classmethod
    def from_row_labels(
        cls,
        objects: Iterable[str],
        attributes: Iterable[str],
        rows: Mapping[str, Iterable[str]],
        *,
        name: str = "",
    ) -> FormalContext:
        """Build a context from per-object attribute label sets."""
        objs = tuple(objects)
        attrs = tuple(attributes)
        attr_pos = {a: i for i, a in enumerate(attrs)}
        incidence = []
        for obj in objs:
            row = [False] * len(attrs)
            for label in rows.get(obj, ()):
                try:
                    row[attr_pos[label]] = True
                except KeyError:
                    raise ValueError(f"unknown attribute label {label!r} for object {obj!r}")
            incidence.append(row)
        return cls(objs, attrs, incidence, name=name)

    # -- basic accessors ---------------------------------------------------

    @property
    def objects(self) -> tuple[str, ...]:
        return self._objects

    @property
    def attributes(self) -> tuple[str, ...]:
        return self._attributes

    @property
    def name(self) -> str:
        return self._name

    @property
    def incidence(self) -> tuple[tuple[bool, ...], ...]:
        n = len(self._attributes)
        return tuple(
            tuple(bool(row >> m & 1) for m in range(n)) for row in self._rows
        )

    def object_index(self, label: str) -> int:
        try:
            return self._obj_index[label]
        except KeyError:
            raise ValueError(f"unknown object label {label!r}")

    def attribute_index(self, label: str) -> int:
        try:
            return self._attr_index[label]
        except KeyError:
            raise ValueError(f"unknown attribute label {label!r}")

    def attribute_set(self, *labels: str) -> AttributeSet:
        """AttributeSet for the given labels."""
        return AttributeSet.of(self.attribute_index(lb) for lb in labels)

    def attribute_labels(self, attrs: AttributeSet) -> tuple[str, ...]:
        """Labels of ``attrs`` in ascending index order."""
        self._check_attr_mask(attrs.mask)
        return tuple(self._attributes[i] for i in attrs)

    def object_labels(self, objs: Iterable[int]) -> tuple[str, ...]:
        indices = sorted(self._check_obj_indices(objs))
        return tuple(self._objects[g] for g in indices)

    def row(self, obj_index: int) -> AttributeSet:
        """The attribute set of one object (its full row)."""
        if not 0 <= obj_index < len(self._objects):
            raise ValueError(f"object index {obj_index} out of range")
        return AttributeSet(self._rows[obj_index])

    # -- derivation and closure ---------------------------------------------

    def derive_attributes(self, objs: Iterable[int]) -> AttributeSet:
        """Attributes common to every object in ``objs``.

        The empty object set derives to the full attribute set (empty
        intersection convention).
        """
        mask = 0
        for g in self._check_obj_indices(objs):
            mask |= 1 << g
        return AttributeSet(self._intent_mask(mask))

    def derive_objects(self, attrs: AttributeSet) -> frozenset[int]:
        """Objects possessing every attribute in ``attrs`` (the extent).

        The empty attribute set derives to the full object set.
        """
        self._check_attr_mask(attrs.mask)
        extent = self._extent_mask(attrs.mask)
        out = set()
        while extent:
            low = extent & -extent
            out.add(low.bit_length() - 1)
            extent ^= low
        return frozenset(out)

    def closure(self, attrs: AttributeSet) -> AttributeSet:
        """The intent generated by ``attrs``: derive objects, then attributes.

        Extensive, monotone and idempotent; its fixpoints are exactly the
        intents of the context.
        """
        self._check_attr_mask(attrs.mask)
        return AttributeSet(self._closure_mask(attrs.mask))

    # -- internal mask kernels ----------------------------------------------

    def _extent_mask(self, attr_mask: int) -> int:
        extent = self._full_obj_mask
        cols = self._cols
        while attr_mask:
            low = attr_mask & -attr_mask
            extent &= cols[low.bit_length() - 1]
            if not extent:
                return 0
            attr_mask ^= low
        return extent

    def _intent_mask(self, obj_mask: int) -> int:
        intent = self._full_attr_mask
        rows = self._rows
        while obj_mask:
            low = obj_mask & -obj_mask
            intent &= rows[low.bit_length() - 1]
            if not intent:
                return 0
            obj_mask ^= low
        return intent

    def _closure_mask(self, attr_mask: int) -> int:
        return self._intent_mask(self._extent_mask(attr_mask))

    def _support(self, attr_mask: int) -> int:
        return self._extent_mask(attr_mask).bit_count()

    def _check_attr_mask(self, mask: int) -> None:
        if mask < 0 or mask >> len(self._attributes):
            raise ValueError(
                f"attribute index out of range for context with "
                f"{len(self._attributes)} attributes"
            )

    def _check_obj_indices(self, objs: Iterable[int]) -> list[int]:
        indices = list(objs)
        for g in indices:
            if not 0 <= g < len(self._objects):
                raise ValueError(f"object index {g} out of range")
        return indices

    # -- value semantics ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        # name is metadata, not part of the context's identity
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (
            self._objects == other._objects
            and self._attributes == other._attributes
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self._objects, self._attributes, self._rows))

    def __repr__(self) -> str:
        return (
            f"FormalContext({len(self._objects)}x{len(self._attributes)}"
            + (f", name={self._name!r})" if self._name else ")")
        )
