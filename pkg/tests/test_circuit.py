"""Circuit description language: parsing, diagnostics, rendering, evaluation."""

import math
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twinbeam import (
    Loss,
    MeasureJoint,
    MeasureSingle,
    Mix,
    ModelParams,
    Squeeze2,
    apply_overrides,
    evaluate,
    noise_quartet,
    parse,
    render,
)
from twinbeam.circuit import (
    DUPLICATE_MODE,
    NO_MEASURE,
    OUT_OF_RANGE,
    SYNTAX,
    UNDECLARED_MODE,
    UNKNOWN_KEYWORD,
)

DATA = Path(__file__).parent / "data"
CIRCUITS = Path(__file__).parent.parent / "circuits"

TWIN_BEAM = """\
# twin beams with unbalanced transmission
mode p
mode c
squeeze2 p c gain=3.02
loss p t=0.73
loss c t=0.77
measure p phase=0.0
measure c phase=0.0
measure_joint p c phase_a=0.0 phase_b=0.0 sign=-
measure_joint p c phase_a=0.0 phase_b=0.0 sign=+
"""


class TestParse:
    def test_accepts_well_formed_circuit(self):
        r = parse(TWIN_BEAM)
        assert r.ok
        assert not r.diagnostics
        assert [m.name for m in r.spec.modes] == ["p", "c"]
        assert r.spec.elements[0] == Squeeze2(mode_a="p", mode_b="c", gain=3.02)
        assert r.spec.elements[1] == Loss(mode="p", t=0.73)
        assert r.spec.elements[-1].sign == +1

    def test_keys_may_appear_in_any_order(self):
        a = parse("mode p\nmix p v=0.9 eps=0.5\nmeasure p phase=0.0\n")
        b = parse("mode p\nmix p eps=0.5 v=0.9\nmeasure p phase=0.0\n")
        assert a.ok and b.ok
        assert a.spec == b.spec

    def test_comments_and_blank_lines_are_ignored(self):
        text = "\n# leading comment\n\nmode a   # trailing comment\nmeasure a phase=0.0\n"
        r = parse(text)
        assert r.ok
        assert len(r.spec.modes) == 1

    def test_optional_ancilla_variance_key(self):
        r = parse("mode p\nmix p v=0.9 eps=0.5 anc_var=3.0\nmeasure p phase=0.0\n")
        assert r.ok
        assert r.spec.elements[0] == Mix(mode="p", v=0.9, eps=0.5, anc_var=3.0)

    def test_failed_parse_has_no_spec(self):
        r = parse("mode p\nloss p t=2.0\nmeasure p phase=0.0\n")
        assert not r.ok
        assert r.spec is None


class TestDiagnostics:
    def corpus(self, name):
        return parse((DATA / "malformed" / name).read_text())

    def kinds(self, name):
        return [(d.kind, d.line) for d in self.corpus(name).diagnostics]

    def test_unknown_keyword(self):
        assert self.kinds("unknown_keyword.qnet") == [(UNKNOWN_KEYWORD, 3)]

    def test_undeclared_mode(self):
        assert self.kinds("undeclared_mode.qnet") == [(UNDECLARED_MODE, 2)]

    def test_out_of_range_values_are_all_collected(self):
        assert self.kinds("out_of_range.qnet") == [(OUT_OF_RANGE, 3), (OUT_OF_RANGE, 4)]

    def test_duplicate_mode(self):
        assert self.kinds("duplicate_mode.qnet") == [(DUPLICATE_MODE, 2)]

    def test_syntax_problems_do_not_stop_the_scan(self):
        # one bad float, one duplicate key, one missing key, and since the
        # sole measure line is broken the whole-file check fires too
        got = self.kinds("syntax.qnet")
        assert got == [(SYNTAX, 2), (SYNTAX, 3), (SYNTAX, 4), (NO_MEASURE, 0)]

    def test_missing_measure_is_reported_on_line_zero(self):
        assert self.kinds("no_measure.qnet") == [(NO_MEASURE, 0)]

    def test_messages_name_the_offending_token(self):
        r = self.corpus("undeclared_mode.qnet")
        assert "'q'" in r.diagnostics[0].message

    def test_rejects_non_finite_floats(self):
        for bad in ("nan", "inf", "-inf"):
            r = parse(f"mode p\nloss p t={bad}\nmeasure p phase=0.0\n")
            assert not r.ok
            assert r.diagnostics[0].kind == SYNTAX

    def test_rejects_same_mode_twice_in_pair_statements(self):
        r = parse("mode p\nsqueeze2 p p gain=2.0\nmeasure p phase=0.0\n")
        assert not r.ok
        assert r.diagnostics[0].kind == SYNTAX

    def test_rejects_bad_sign_token(self):
        r = parse(
            "mode p\nmode c\nsqueeze2 p c gain=2.0\n"
            "measure_joint p c phase_a=0.0 phase_b=0.0 sign=x\n"
        )
        assert not r.ok
        assert r.diagnostics[0].kind == SYNTAX


class TestRender:
    def test_round_trip_is_exact(self):
        for text in (TWIN_BEAM,):
            first = parse(text)
            assert first.ok
            second = parse(render(first.spec))
            assert second.ok
            assert second.spec == first.spec

    def test_shipped_circuits_round_trip(self):
        for path in sorted(CIRCUITS.glob("*.qnet")):
            first = parse(path.read_text())
            assert first.ok, path.name
            second = parse(render(first.spec))
            assert second.spec == first.spec, path.name

    @settings(deadline=None, derandomize=True, max_examples=100)
    @given(
        gain=st.floats(min_value=1.0, max_value=50.0),
        t=st.floats(min_value=0.0, max_value=1.0),
        v=st.floats(min_value=0.0, max_value=1.0),
        eps=st.floats(min_value=0.0, max_value=1.0),
        phase=st.floats(min_value=-10.0, max_value=10.0),
        sign=st.sampled_from(["+", "-"]),
    )
    def test_round_trip_preserves_every_float_bit(self, gain, t, v, eps, phase, sign):
        text = (
            f"mode p\nmode c\nsqueeze2 p c gain={gain!r}\nloss p t={t!r}\n"
            f"mix c v={v!r} eps={eps!r}\n"
            f"measure_joint p c phase_a={phase!r} phase_b=0.0 sign={sign}\n"
        )
        first = parse(text)
        assert first.ok
        second = parse(render(first.spec))
        assert second.spec == first.spec


class TestEvaluate:
    def test_ideal_pair_matches_closed_forms(self):
        r = parse((CIRCUITS / "tmss_ideal.qnet").read_text())
        assert r.ok
        got = evaluate(r.spec)
        assert got[0] == pytest.approx(3.0, rel=1e-12)
        assert got[1] == pytest.approx(3 - 2 * math.sqrt(2), rel=1e-12)
        assert got[2] == pytest.approx(3 + 2 * math.sqrt(2), rel=1e-12)

    def test_shipped_benchmark_circuit_matches_noise_model(self):
        r = parse((CIRCUITS / "fig5.qnet").read_text())
        assert r.ok
        got = evaluate(r.spec)
        q = noise_quartet(
            ModelParams(gain=3.02, eta_p=0.73, eta_c=0.77, v_p=0.986, v_c=0.986,
                        eps_p=0.9, eps_c=1.0)
        )
        want = [q.probe, q.conjugate, q.squeezed, q.antisqueezed]
        for g, w in zip(got, want):
            assert g == pytest.approx(w, rel=1e-10)

    def test_results_follow_statement_order(self):
        text = (
            "mode p\nmode c\nsqueeze2 p c gain=2.0\n"
            "measure_joint p c phase_a=0.0 phase_b=0.0 sign=+\n"
            "measure p phase=0.0\n"
        )
        r = parse(text)
        got = evaluate(r.spec)
        assert got[0] == pytest.approx(3 + 2 * math.sqrt(2), rel=1e-12)
        assert got[1] == pytest.approx(3.0, rel=1e-12)

    def test_element_order_changes_results(self):
        # attenuating before amplifying is not the same as after
        before = parse(
            "mode p\nmode c\nloss p t=0.5\nsqueeze2 p c gain=3.0\n"
            "measure p phase=0.0\n"
        )
        after = parse(
            "mode p\nmode c\nsqueeze2 p c gain=3.0\nloss p t=0.5\n"
            "measure p phase=0.0\n"
        )
        v_before = evaluate(before.spec)[0]
        v_after = evaluate(after.spec)[0]
        assert v_before == pytest.approx(5.0, rel=1e-12)
        assert v_after == pytest.approx(3.0, rel=1e-12)

    def test_tap_measurement_sees_state_before_later_loss(self):
        text = (
            "mode p\nmode c\nsqueeze2 p c gain=2.0\n"
            "measure p phase=0.0\nloss p t=0.5\nmeasure p phase=0.0\n"
        )
        got = evaluate(parse(text).spec)
        assert got[0] == pytest.approx(3.0, rel=1e-12)
        assert got[1] == pytest.approx(2.0, rel=1e-12)

    def test_explicit_vacuum_ancilla_neutralizes_thermal_fraction(self):
        # anc_var=1 pins the admitted background at vacuum no matter eps
        base = "mode p\nmode c\nsqueeze2 p c gain=3.0\nloss p t=0.8\n"
        tail = "measure p phase=0.0\n"
        with_eps = parse(base + "mix p v=0.9 eps=0.7 anc_var=1.0\n" + tail)
        as_loss = parse(base + "mix p v=0.9 eps=0.0\n" + tail)
        assert evaluate(with_eps.spec)[0] == pytest.approx(
            evaluate(as_loss.spec)[0], rel=1e-12
        )

    def test_default_ancilla_tracks_the_beam_itself(self):
        # with eps=1 and no explicit ancilla the admitted background is as
        # noisy as the beam, so the arm noise ignores the visibility
        base = "mode p\nmode c\nsqueeze2 p c gain=3.0\nloss p t=0.8\n"
        tail = "measure p phase=0.0\n"
        mixed = parse(base + "mix p v=0.9 eps=1.0\n" + tail)
        clean = parse(base + tail)
        assert evaluate(mixed.spec)[0] == pytest.approx(
            evaluate(clean.spec)[0], rel=1e-12
        )


class TestOverrides:
    def spec(self):
        return parse(TWIN_BEAM).spec

    def test_override_gain(self):
        new = apply_overrides(self.spec(), ["squeeze2.gain=5.0"])
        assert new.elements[0].gain == 5.0
        # original is untouched
        assert self.spec().elements[0].gain == 3.02

    def test_override_selects_by_mode(self):
        new = apply_overrides(self.spec(), ["loss@p.t=0.5"])
        assert new.elements[1] == Loss(mode="p", t=0.5)
        assert new.elements[2] == Loss(mode="c", t=0.77)

    def test_bare_selector_updates_all_matches(self):
        new = apply_overrides(self.spec(), ["loss.t=1.0"])
        assert new.elements[1].t == 1.0
        assert new.elements[2].t == 1.0

    def test_override_sign(self):
        new = apply_overrides(self.spec(), ["measure_joint@p,c.sign=+"])
        assert all(
            e.sign == +1 for e in new.elements if isinstance(e, MeasureJoint)
        )

    def test_override_changes_evaluation(self):
        new = apply_overrides(self.spec(), ["loss@p.t=1.0", "loss@c.t=1.0"])
        got = evaluate(new)
        q = noise_quartet(ModelParams(gain=3.02))
        assert got[0] == pytest.approx(q.probe, rel=1e-10)
        assert got[2] == pytest.approx(q.squeezed, rel=1e-10)

    def test_rejects_unmatched_selector(self):
        with pytest.raises(ValueError):
            apply_overrides(self.spec(), ["mix.v=0.9"])
        with pytest.raises(ValueError):
            apply_overrides(self.spec(), ["loss@x.t=0.5"])

    def test_rejects_unknown_or_forbidden_key(self):
        with pytest.raises(ValueError):
            apply_overrides(self.spec(), ["loss.q=0.5"])
        with pytest.raises(ValueError):
            apply_overrides(self.spec(), ["loss.mode=1"])

    def test_rejects_out_of_range_value(self):
        with pytest.raises(ValueError):
            apply_overrides(self.spec(), ["loss@p.t=1.5"])
        with pytest.raises(ValueError):
            apply_overrides(self.spec(), ["squeeze2.gain=0.2"])

    def test_rejects_malformed_setting(self):
        with pytest.raises(ValueError):
            apply_overrides(self.spec(), ["loss@p.t"])
        with pytest.raises(ValueError):
            apply_overrides(self.spec(), ["=0.5"])


class TestSingleMeasurePhaseIsotropy:
    def test_single_mode_noise_is_phase_independent(self):
        # every reachable single-mode marginal is isotropic, so the
        # measured phase must not change the arm noise
        base = (
            "mode p\nmode c\nsqueeze2 p c gain=3.0\nloss p t=0.7\n"
            "mix p v=0.9 eps=0.5\n"
        )
        v0 = evaluate(parse(base + "measure p phase=0.0\n").spec)[0]
        v1 = evaluate(parse(base + "measure p phase=0.7853981633974483\n").spec)[0]
        v2 = evaluate(parse(base + "measure p phase=1.5707963267948966\n").spec)[0]
        assert v1 == pytest.approx(v0, rel=1e-12)
        assert v2 == pytest.approx(v0, rel=1e-12)
