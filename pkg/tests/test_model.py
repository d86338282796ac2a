import pytest

from bctp.model import (
    ALL_FACTOR_IDS,
    ComplexityClass,
    ConfigError,
    FactorFamily,
    FactorId,
    FactorRatingSet,
    ImpactLevel,
    MethodConfig,
    ValidationError,
    function_findings,
    level_bounds,
    validate_function,
)

from conftest import make_function


@pytest.mark.parametrize("level, expected", [
    (ImpactLevel.L1, (2, 2)),
    (ImpactLevel.L2, (24, 24)),
    (ImpactLevel.L3, (72, 72)),
    (ImpactLevel.L4, (168, 168)),
])
def test_level_bounds(level, expected):
    assert level_bounds(level) == expected


def test_level_bounds_monotone():
    maos = [level_bounds(l)[0] for l in ImpactLevel]
    assert maos == sorted(maos) and len(set(maos)) == 4


def test_basic_is_an_alias_for_simple():
    assert ComplexityClass.parse("Basic") is ComplexityClass.SIMPLE
    assert ComplexityClass.parse(" COMPLEX ") is ComplexityClass.COMPLEX
    with pytest.raises(ValueError):
        ComplexityClass.parse("huge")


def test_factor_id_parse_and_description():
    fid = FactorId.parse("urf1")
    assert fid == FactorId(FactorFamily.URF, 1)
    assert str(fid) == "URF1"
    assert fid.description == "Weather conditions"
    assert FactorId.parse("ERF7").description.startswith("Part")
    for bad in ("URF7", "TRF0", "XYZ1", "ERF"):
        with pytest.raises(ValidationError):
            FactorId.parse(bad)


def test_catalog_has_27_factors():
    assert len(ALL_FACTOR_IDS) == 27
    assert len(set(ALL_FACTOR_IDS)) == 27


def test_default_config_values():
    cfg = MethodConfig()
    assert [cfg.weight_of(c) for c in ComplexityClass] == [1, 2, 3]
    assert cfg.transaction_bounds == (3, 7)
    assert cfg.trf_coefficients == (0.6, 0.001)
    assert cfg.erf_coefficients == (1.4, -0.03)
    assert cfg.urf_coefficients == (1.0, 0.02)
    assert list(cfg.trf_weights.values()) == [2, 2, 1, 1, 1, 0.5, 0.5, 2, 1, 1, 1, 1, 1]
    assert list(cfg.erf_weights.values()) == [1.5, 0.5, 1, 0.5, 1, 2, -1, 2]
    assert list(cfg.urf_weights.values()) == [1] * 6
    assert (cfg.theta_mbco, cfg.theta_34, cfg.theta_12) == (20, 10, 25)
    assert cfg.effort_rate_hours_per_point == 0.05
    assert cfg.ucp_hours_per_point == 20
    assert cfg.profile_name == "paper-literal"
    assert cfg.full_evaluation is False


def test_profiles():
    classic = MethodConfig.profile("karner-classic")
    assert classic.trf_coefficients == (0.6, 0.01)
    assert classic.profile_name == "karner-classic"
    assert MethodConfig.profile("paper-literal") == MethodConfig()
    with pytest.raises(ConfigError):
        MethodConfig.profile("nope")


@pytest.mark.parametrize("cfg", [MethodConfig(), MethodConfig.profile("karner-classic"),
                                 MethodConfig(theta_mbco=30, urf_weights={f"URF{i}": i for i in range(1, 7)})])
def test_config_round_trip(cfg):
    assert MethodConfig.from_dict(cfg.to_dict()) == cfg
    assert MethodConfig.from_dict(cfg.to_dict()).fingerprint() == cfg.fingerprint()


def test_partial_override_merges_tables():
    cfg = MethodConfig.from_dict({"erf_weights": {"ERF7": -2}, "theta_12": 30})
    assert cfg.erf_weights["ERF7"] == -2
    assert cfg.erf_weights["ERF1"] == 1.5
    assert cfg.theta_12 == 30


def test_fingerprint_changes_with_config():
    assert MethodConfig().fingerprint() != MethodConfig(theta_12=26).fingerprint()
    assert MethodConfig().fingerprint() == MethodConfig().fingerprint()


@pytest.mark.parametrize("overrides, needle", [
    ({"class_weights": {"simple": 2, "average": 2, "complex": 3}}, "strictly increasing"),
    ({"effort_rate_hours_per_point": 0}, "effort_rate"),
    ({"ucp_hours_per_point": -1}, "ucp_hours"),
    ({"theta_34": 21}, "theta_34"),
    ({"urf_weights": {"URF2": -0.5}}, "URF2"),
    ({"trf_weights": {"TRF14": 1}}, "trf_weights"),
    ({"bogus": 1}, "bogus"),
])
def test_config_rejects_inconsistent_values(overrides, needle):
    with pytest.raises(ConfigError, match=needle):
        MethodConfig.from_dict(overrides)


def test_valid_function_has_no_findings():
    assert function_findings(make_function(steps=(1, 2))) == []


@pytest.mark.parametrize("kwargs, code", [
    ({"steps": ()}, "no-process"),
    ({"steps": (0,)}, "step-count"),
    ({"rto": 5.0, "mao": 2.0}, "rto-mao-order"),
    ({"rto": 2.0, "mao": 2.0}, "rto-mao-order"),
    ({"rto": -1.0}, "nonpositive-budget"),
    ({"ratings": FactorRatingSet.uniform(0).with_rating("TRF3", 6)}, "rating-range"),
    ({"ratings": FactorRatingSet({k: 0 for k in ALL_FACTOR_IDS if k != "URF4"})}, "missing-factor"),
    ({"fid": ""}, "empty-id"),
])
def test_function_findings(kwargs, code):
    function = make_function(**kwargs)
    codes = [f.code for f in function_findings(function)]
    assert code in codes
    with pytest.raises(ValidationError):
        validate_function(function)


def test_duplicate_member_ids_are_reported():
    f = make_function(steps=(1, 2))
    f = type(f)(**{**f.__dict__, "processes": (f.processes[0], f.processes[0])})
    assert [x.code for x in function_findings(f)] == ["duplicate-member-id"]
