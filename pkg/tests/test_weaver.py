import itertools

import pytest

from ctxbridge.errors import (
    DuplicateAspect,
    PointcutSyntaxError,
    UnknownAction,
    UnknownAspect,
)
from ctxbridge.weaver import (
    Advice,
    Aspect,
    Joinpoint,
    Pointcut,
    Vetoed,
    Weaver,
    matches,
    parse_pointcut,
    render_pointcut,
)

CODE2_POINTCUT = ("execution(* com.Android_Location_Profile_Service"
                  ".Android_Profile_Service.onCreate(..))")
CODE2_JOINPOINT = Joinpoint(
    "android1",
    "com.Android_Location_Profile_Service.Android_Profile_Service",
    "onCreate",
)


# --- parsing -----------------------------------------------------------------

def test_parse_code2_pointcut():
    pc = parse_pointcut(CODE2_POINTCUT)
    assert pc.return_pattern == "*"
    assert pc.path_pattern == ("com", "Android_Location_Profile_Service",
                               "Android_Profile_Service")
    assert pc.method_pattern == "onCreate"
    assert pc.args_pattern == ".."


def test_parse_tolerates_star_glued_to_path():
    pc = parse_pointcut("execution(*com.X.onCreate(..))")
    assert pc.return_pattern == "*"
    assert pc.path_pattern == ("com", "X")
    assert pc.method_pattern == "onCreate"


def test_parse_typed_args_and_return():
    pc = parse_pointcut("execution(string a.b.m(string, int))")
    assert pc.return_pattern == "string"
    assert pc.args_pattern == ("string", "int")
    pc = parse_pointcut("execution(* a.m())")
    assert pc.args_pattern == ()


def test_render_parse_round_trip():
    for text in [CODE2_POINTCUT, "execution(string a.b.m(string, int))",
                 "execution(* *.*.onCreate(..))", "execution(* a.m())"]:
        pc = parse_pointcut(text)
        assert parse_pointcut(render_pointcut(pc)) == pc


@pytest.mark.parametrize("bad", [
    "before(* a.m(..))",
    "execution(a(..))",
    "execution(* a.m(banana))",
    "execution(* a..m(..))",
    "execution(* a.m(..)",
])
def test_parse_rejects_bad_pointcuts(bad):
    with pytest.raises(PointcutSyntaxError):
        parse_pointcut(bad)


# --- matching vs brute-force oracle ------------------------------------------------

def oracle_matches(pc: Pointcut, jp: Joinpoint) -> bool:
    """Independent position-by-position matcher."""
    if jp.phase != "execution":
        return False
    segs = jp.target_path.split(".")
    if len(segs) != len(pc.path_pattern):
        return False
    ok = all(p == "*" or p == s for p, s in zip(pc.path_pattern, segs))
    ok = ok and (pc.method_pattern in ("*", jp.method))
    ok = ok and (pc.return_pattern == "*"
                 or pc.return_pattern == jp.return_type)
    ok = ok and (pc.args_pattern == ".." or pc.args_pattern == jp.arg_types)
    return ok


ALPHABET = ("a", "b", "svc", "onCreate")


def enumerate_corpus():
    paths = []
    for n in (1, 2, 3):
        paths.extend(itertools.product(ALPHABET, repeat=n))
    joinpoints = [Joinpoint("p1", ".".join(path), method)
                  for path in paths for method in ALPHABET]
    patterns = []
    pattern_alphabet = ALPHABET + ("*",)
    for n in (1, 2, 3):
        for path in itertools.product(pattern_alphabet, repeat=n):
            for method in pattern_alphabet:
                patterns.append(Pointcut("*", tuple(path), method, ".."))
    return joinpoints, patterns


def test_matcher_agrees_with_oracle_exhaustively():
    joinpoints, patterns = enumerate_corpus()
    assert len(joinpoints) == (4 + 16 + 64) * 4
    for pc in patterns:
        for jp in joinpoints:
            assert matches(pc, jp) == oracle_matches(pc, jp)


def test_code2_pattern_matches_its_joinpoint():
    pc = parse_pointcut(CODE2_POINTCUT)
    assert matches(pc, CODE2_JOINPOINT)
    assert not matches(pc, Joinpoint("android1",
                                     CODE2_JOINPOINT.target_path, "onDestroy"))


def test_wildcard_two_segment_pattern():
    pc = parse_pointcut("execution(* *.*.onCreate(..))")
    assert matches(pc, Joinpoint("p", "x.y", "onCreate"))
    assert not matches(pc, Joinpoint("p", "x", "onCreate"))
    assert not matches(pc, Joinpoint("p", "x.y.z", "onCreate"))


def test_concrete_return_and_args_need_metadata():
    pc = parse_pointcut("execution(string a.m(int))")
    bare = Joinpoint("p", "a", "m")
    typed = Joinpoint("p", "a", "m", return_type="string", arg_types=("int",))
    assert not matches(pc, bare)
    assert matches(pc, typed)


# --- weaving and dispatch ------------------------------------------------------

def make_weaver(trace_sink):
    weaver = Weaver(emit_log=lambda aspect, text: trace_sink.append(text))
    weaver.register_action("noop", lambda ctx: None)
    weaver.register_action("log", lambda ctx: ctx.emit(f"{ctx.aspect_id}:{ctx.kind}"))
    weaver.register_action("veto", lambda ctx: ctx.veto("stop"))
    return weaver


def aspect(aspect_id, kinds=("before",), action="noop",
           pointcut="execution(* a.m(..))"):
    return Aspect(aspect_id, parse_pointcut(pointcut),
                  tuple(Advice(kind, action) for kind in kinds))


JP = Joinpoint("p", "a", "m")


def test_weave_unweave_cycle():
    weaver = make_weaver([])
    weaver.weave(aspect("A"))
    assert [a.aspect_id for a in weaver.woven()] == ["A"]
    with pytest.raises(DuplicateAspect):
        weaver.weave(aspect("A"))
    weaver.unweave("A")
    assert weaver.woven() == ()
    with pytest.raises(UnknownAspect):
        weaver.unweave("A")


def test_weave_requires_registered_action():
    weaver = make_weaver([])
    with pytest.raises(UnknownAction):
        weaver.weave(aspect("A", action="ghost"))


def test_dispatch_without_aspects_is_identity():
    weaver = make_weaver([])
    result, trace = weaver.dispatch(JP, lambda x: x * 2, (21,))
    assert result == 42
    assert trace == []


def test_dispatch_fires_matching_before_advice():
    logs = []
    weaver = make_weaver(logs)
    weaver.weave(aspect("BeforeService", ("before",), "log"))
    result, trace = weaver.dispatch(JP, lambda: "done")
    assert result == "done"
    assert trace == ["BeforeService"]
    assert logs == ["BeforeService:before"]


def test_unweave_restores_prior_trace():
    weaver = make_weaver([])
    _, baseline = weaver.dispatch(JP, lambda: None)
    weaver.weave(aspect("A"))
    _, with_aspect = weaver.dispatch(JP, lambda: None)
    assert with_aspect == ["A"]
    weaver.unweave("A")
    _, after = weaver.dispatch(JP, lambda: None)
    assert after == baseline == []


def expected_trace(order):
    before = list(order)
    around = list(order)
    after = list(reversed(order))
    return before + around + after


def test_ordering_law_for_all_permutations_up_to_four():
    ids = ["A1", "A2", "A3", "A4"]
    for n in range(1, 5):
        for perm in itertools.permutations(ids[:n]):
            weaver = make_weaver([])
            for aspect_id in perm:
                weaver.weave(aspect(aspect_id, ("before", "around", "after")))
            result, trace = weaver.dispatch(JP, lambda: "r")
            assert result == "r"
            assert trace == expected_trace(list(perm))


def test_two_aspect_order_example():
    weaver = make_weaver([])
    weaver.weave(aspect("A", ("before", "after")))
    weaver.weave(aspect("B", ("before", "after")))
    _, trace = weaver.dispatch(JP, lambda: None)
    assert trace == ["A", "B", "B", "A"]


def test_around_veto_yields_vetoed_and_skips_body():
    weaver = make_weaver([])
    weaver.weave(aspect("G", ("around",), "veto"))
    calls = []
    result, trace = weaver.dispatch(JP, lambda: calls.append(1))
    assert isinstance(result, Vetoed)
    assert result.reason == "stop"
    assert calls == []
    assert trace == ["G"]


def test_veto_skips_inner_arounds_but_afters_observe():
    weaver = make_weaver([])
    seen = []
    weaver.register_action("watch", lambda ctx: seen.append(ctx.result))
    weaver.weave(aspect("G", ("around",), "veto"))
    weaver.weave(aspect("H", ("around",)))
    weaver.weave(aspect("W", ("after",), "watch"))
    result, trace = weaver.dispatch(JP, lambda: "never")
    assert isinstance(result, Vetoed)
    assert trace == ["G", "W"]
    assert seen == [result]


def test_before_advice_cannot_veto():
    weaver = make_weaver([])
    weaver.weave(aspect("A", ("before",), "veto"))
    with pytest.raises(ValueError):
        weaver.dispatch(JP, lambda: None)


def test_body_errors_propagate():
    weaver = make_weaver([])
    weaver.weave(aspect("A"))

    def boom():
        raise RuntimeError("kaput")

    with pytest.raises(RuntimeError):
        weaver.dispatch(JP, boom)
