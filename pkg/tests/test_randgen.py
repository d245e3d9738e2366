"""The random knowledge-base generator."""

from __future__ import annotations

import json
import random

import pytest

from tdlite.kb import (
    AlwP,
    AtLeast,
    Bottom,
    ConceptAssertion,
    NextP,
    RoleAssertion,
    SomeP,
    concept_size,
    iter_subconcepts,
    validate,
)
from tdlite.randgen import (
    BatchSpec,
    N_WINDOW,
    Z_WINDOW,
    generate_instance,
    instance_seed,
    random_concept,
    random_concept_temporal,
    random_tbox,
    write_batch,
)

PAST = (NextP, SomeP, AlwP)


def test_batch_spec_validation():
    with pytest.raises(ValueError):
        BatchSpec(F=0)
    with pytest.raises(ValueError):
        BatchSpec(Pt=1.5)
    BatchSpec()  # defaults are fine


@pytest.mark.parametrize("length", [1, 2, 3, 5, 9, 16])
def test_concept_length_is_exact(length):
    spec = BatchSpec(N=3, Q=2)
    rng = random.Random(length)
    for _ in range(300):
        assert concept_size(random_concept(length, spec, rng)) == length
        if length >= 2:
            assert concept_size(random_concept_temporal(length, spec, rng)) == length


def test_bottom_only_when_allowed():
    spec = BatchSpec(N=1, Q=1)
    rng = random.Random(0)
    drawn = [random_concept(1, spec, rng, allow_bottom=True) for _ in range(500)]
    assert any(isinstance(c, Bottom) for c in drawn)
    rng = random.Random(0)
    drawn = [random_concept(3, spec, rng) for _ in range(200)]
    assert not any(
        isinstance(s, Bottom) for c in drawn for s in iter_subconcepts(c)
    )


def test_future_only_mode_has_no_past_operators():
    spec = BatchSpec(N=2, Lt=10, Lc=6, Q=2, seed=1)
    rng = random.Random(9)
    kb = random_tbox(spec, rng, temporal=True, future_only=True)
    for ci in kb.tbox:
        for side in (ci.lhs, ci.rhs):
            assert not any(isinstance(s, PAST) for s in iter_subconcepts(side))


def test_generated_kbs_are_well_formed():
    spec = BatchSpec(F=10, N=3, Lt=4, Lc=5, Q=2, abox_size=7, seed=2)
    for i in range(spec.F):
        kb = generate_instance(spec, i, temporal=(i % 2 == 0))
        # small individual pools can repeat an assertion; nothing else
        # may be diagnosed
        assert all(d.code == "DUPLICATE_AXIOM" for d in validate(kb))
        assert len(kb.tbox) == spec.Lt
        assert len(kb.abox) == spec.abox_size


def test_abox_timestamps_respect_the_flow_window():
    spec = BatchSpec(F=1, N=2, Lt=2, Lc=3, Q=1, abox_size=40, seed=8)
    for flow, (lo, hi) in (("z", Z_WINDOW), ("n", N_WINDOW)):
        kb = generate_instance(spec, 0, flow=flow)
        times = [a.time for a in kb.abox]
        assert times, "expected assertions"
        assert all(lo <= t <= hi for t in times)


def test_abox_mixes_concept_and_role_facts():
    spec = BatchSpec(F=1, N=2, Lt=2, Lc=3, Q=1, abox_size=60, seed=8)
    kb = generate_instance(spec, 0)
    kinds = {type(a) for a in kb.abox}
    assert kinds == {ConceptAssertion, RoleAssertion}


def test_generation_is_deterministic_per_index():
    spec = BatchSpec(F=3, N=2, Lt=3, Lc=4, Q=1, abox_size=3, seed=42)
    for i in range(3):
        assert generate_instance(spec, i) == generate_instance(spec, i)
    assert generate_instance(spec, 0) != generate_instance(spec, 1)
    assert instance_seed(spec, 1) == (42 ^ 1)


def test_write_batch_layout(tmp_path):
    spec = BatchSpec(F=4, N=2, Lt=2, Lc=3, Q=1, seed=7)
    paths = write_batch(spec, str(tmp_path), temporal=True, flow="n")
    assert [p.split("/")[-1] for p in paths] == [
        f"tbox_{i:04d}.kb" for i in range(4)
    ]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["spec"]["F"] == 4
    assert manifest["flow"] == "n"
    assert manifest["temporal"] is True
    assert [e["seed"] for e in manifest["instances"]] == [
        instance_seed(spec, i) for i in range(4)
    ]


def test_cardinalities_stay_within_q():
    spec = BatchSpec(N=2, Q=3)
    rng = random.Random(13)
    for _ in range(300):
        c = random_concept(5, spec, rng)
        for s in iter_subconcepts(c):
            if isinstance(s, AtLeast):
                assert 1 <= s.q <= spec.Q
