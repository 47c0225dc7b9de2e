import json
import random

import pytest

from circlek.builtins import (
    builtin_system,
    bunce_deddens_system,
    goodearl_system,
    parse_builtin_name,
)
from circlek.docio import DocumentError, emit_system, parse_system, parse_system_document
from circlek.systems import (
    InductiveSystem,
    PeriodicTail,
    SystemError,
    amplify_system,
    generate_prefix,
    materialize,
)

from corpus import random_periodic_system


def test_generate_prefix_bunce_deddens():
    unrolled = generate_prefix(bunce_deddens_system(), 10)
    assert [s.sizes for s in unrolled.stages] == [(2**n,) for n in range(10)]
    assert unrolled.tail is None


def test_generate_prefix_goodearl():
    unrolled = generate_prefix(goodearl_system(4, 2), 4)
    assert [s.sizes for s in unrolled.stages] == [(4,), (16,), (64,), (256,)]


def test_generate_prefix_tailless_identity():
    system = generate_prefix(bunce_deddens_system(), 5)
    again = generate_prefix(system, 5)
    assert again == system
    with pytest.raises(SystemError):
        generate_prefix(system, 9)


def test_generate_prefix_extends_without_rewriting():
    system = bunce_deddens_system()
    short = generate_prefix(system, 4)
    long = generate_prefix(system, 9)
    assert long.stages[:4] == short.stages
    assert long.maps[:3] == short.maps


def test_tail_generation_must_keep_sizes_positive():
    # an all-zero row with zero pad would create a size-0 summand
    with pytest.raises(SystemError):
        system = InductiveSystem(
            stages=((2,),),
            maps=(),
            tail=PeriodicTail(templates=((((0, 0),),),), pads=((0,),)),
        )
        materialize(system, 3)


def test_amplify_system_scales_sizes_not_entries():
    system = goodearl_system(4, 2)
    doubled = amplify_system(system, 2)
    assert doubled.stages[0].sizes == (8,)
    assert doubled.tail.templates == system.tail.templates
    unrolled = generate_prefix(doubled, 3)
    assert [s.sizes for s in unrolled.stages] == [(8,), (32,), (128,)]


def test_round_trip_builtins():
    for name in ("bunce-deddens", "goodearl", "goodearl:c=6,p=1"):
        system = builtin_system(name)
        assert parse_system(emit_system(system)) == system


def test_round_trip_random_systems():
    rng = random.Random(61)
    for _ in range(25):
        system = random_periodic_system(rng)
        assert parse_system(emit_system(system)) == system
        unrolled = generate_prefix(system, 4)
        assert parse_system(emit_system(unrolled)) == unrolled


def test_meta_round_trip():
    system = bunce_deddens_system()
    text = emit_system(system, meta={"name": "tower", "notes": "doubling"})
    parsed, meta = parse_system_document(text)
    assert parsed == system
    assert meta == {"name": "tower", "notes": "doubling"}


def test_parse_errors_carry_paths():
    with pytest.raises(DocumentError) as err:
        parse_system(json.dumps({"stages": [], "maps": []}))
    assert "at least one stage" in str(err.value)

    doc = {
        "stages": [{"sizes": [1]}, {"sizes": [2]}],
        "maps": [{"entries": [[[0, 5]]]}],
        "tail": {"kind": "none"},
    }
    with pytest.raises(DocumentError) as err:
        parse_system(json.dumps(doc))
    assert "a=0 requires b=0" in str(err.value)
    assert err.value.path == "maps[0].entries[0][0]"

    doc["maps"] = [{"entries": [[[3, 1]]]}]
    with pytest.raises(DocumentError) as err:
        parse_system(json.dumps(doc))
    assert err.value.path == "maps[0].entries[0]"
    assert "uses 3 > target size 2" in str(err.value)


def test_parse_rejects_floats_where_integers_belong():
    doc = {
        "stages": [{"sizes": [1.0]}],
        "maps": [],
        "tail": {"kind": "none"},
    }
    with pytest.raises(DocumentError):
        parse_system(json.dumps(doc))


def test_parse_syntax_error_positioned():
    with pytest.raises(DocumentError) as err:
        parse_system("{not json")
    assert "line 1" in err.value.path


def test_flat_pad_shorthand():
    doc = {
        "stages": [{"sizes": [1]}],
        "maps": [],
        "tail": {
            "kind": "periodic",
            "period": 1,
            "templates": [{"entries": [[[2, 1]]]}],
            "pads": [0],
        },
    }
    system = parse_system(json.dumps(doc))
    assert system == bunce_deddens_system()


def test_tail_chain_width_mismatch():
    doc = {
        "stages": [{"sizes": [1, 1]}],
        "maps": [],
        "tail": {
            "kind": "periodic",
            "period": 1,
            "templates": [{"entries": [[[2, 1]]]}],
            "pads": [[0]],
        },
    }
    with pytest.raises(DocumentError) as err:
        parse_system(json.dumps(doc))
    assert "consumes 1 summands" in str(err.value)


def test_builtin_name_parsing():
    assert parse_builtin_name("goodearl:c=4,p=2") == ("goodearl", {"c": 4, "p": 2})
    assert parse_builtin_name("bunce-deddens") == ("bunce-deddens", {})
    with pytest.raises(DocumentError):
        builtin_system("goodearl:c=2,p=2")
    with pytest.raises(DocumentError):
        builtin_system("no-such-system")


def test_system_validation():
    with pytest.raises(SystemError):
        InductiveSystem(stages=(), maps=())
    with pytest.raises(SystemError):
        InductiveSystem(stages=((1,), (2,)), maps=())


def test_zero_algebra_stage_round_trips():
    system = InductiveSystem(stages=((),), maps=(), tail=None)
    assert parse_system(emit_system(system)) == system


def test_maps_through_empty_stages_round_trip():
    # orphan elimination can empty a stage; its maps must still serialize
    from circlek.algebras import CircleAlgebra
    from circlek.homs import SignatureMatrix

    empty = CircleAlgebra(())
    big = CircleAlgebra((2,))
    into_empty = SignatureMatrix(source=big, target=empty, entries=())
    out_of_empty = SignatureMatrix(source=empty, target=big, entries=((),))
    system = InductiveSystem(
        stages=(big, empty, big), maps=(into_empty, out_of_empty), tail=None
    )
    assert parse_system(emit_system(system)) == system


def test_eliminated_system_round_trips():
    from circlek.stability import orphan_eliminate

    unrolled = generate_prefix(bunce_deddens_system(), 8)
    reduced, _ = orphan_eliminate(unrolled, 1, 8)
    assert reduced.stages[0].sizes == ()
    assert parse_system(emit_system(reduced)) == reduced
