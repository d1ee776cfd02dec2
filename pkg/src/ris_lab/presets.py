"""Named experiment scenarios and config-file loading.

Each preset is a fully populated Scenario; override any field with
``dataclasses.replace`` or through a YAML config file carrying a ``preset``
key plus the fields to change.
"""

from __future__ import annotations

import dataclasses

import yaml

from .channel import FadingSpec
from .harness import Layout, MethodSpec, Scenario

DEFAULT_SEED = 12345
DEFAULT_TRIALS = 100

_CO_LOCATED_TX = ((0.0, 0.0),) * 4
_CO_LOCATED_RX = ((50.0, 0.0),) * 4

_SQUARE_TX = ((50.0, 0.0), (0.0, 50.0), (100.0, 50.0), (50.0, 100.0))
_SQUARE_RIS = ((47.0, 4.0), (3.0, 54.0), (97.0, 46.0), (53.0, 96.0))

_CENTRAL_ARMS = (
    MethodSpec(name="central-mid", algo="filled", surface=("centralized", 50.0, 50.0)),
    MethodSpec(name="central-tx", algo="filled", surface=("centralized", 47.0, 4.0)),
    MethodSpec(name="central-random", algo="filled", surface="centralized-random"),
)

_BENCH_METHODS = (
    MethodSpec(name="filled", algo="filled"),
    MethodSpec(name="sr", algo="sr"),
    MethodSpec(name="msr", algo="msr"),
    MethodSpec(name="ses", algo="ses"),
    MethodSpec(name="ga", algo="ga"),
    MethodSpec(name="no-ris", algo="no-ris"),
)


def _dist_vs_central(name: str, m_values: tuple, p_values: tuple) -> Scenario:
    return Scenario(
        name=name,
        k=4,
        n_levels=4,
        tx=_SQUARE_TX,
        rx=None,
        surface_centers=_SQUARE_RIS,
        mode="distributed",
        m_values=m_values,
        p_values_dbm=p_values,
        methods=(MethodSpec(name="distributed", algo="filled"),) + _CENTRAL_ARMS,
        trials=DEFAULT_TRIALS,
        seed=DEFAULT_SEED,
        room=(100.0, 100.0),
    )


def _bench(name: str, **overrides) -> Scenario:
    base = Scenario(
        name=name,
        k=4,
        n_levels=4,
        tx=_CO_LOCATED_TX,
        rx=_CO_LOCATED_RX,
        surface_centers=((3.0, 4.0),),
        mode="centralized",
        m_values=(8, 16, 32, 64, 96),
        p_values_dbm=(20.0,),
        methods=_BENCH_METHODS,
        trials=DEFAULT_TRIALS,
        seed=DEFAULT_SEED,
        fading=FadingSpec(kind="rician"),
        room=(50.0, 50.0),
    )
    return dataclasses.replace(base, **overrides)


def _build_presets() -> dict:
    presets = {}

    presets["fig-dist-vs-central-sumrate"] = _dist_vs_central(
        "fig-dist-vs-central-sumrate", m_values=(16, 32, 64, 128), p_values=(20.0,)
    )

    presets["fig-power-sweep"] = _dist_vs_central(
        "fig-power-sweep", m_values=(32,), p_values=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    )

    # Distributed arm keeps the square layout; the centralized arm moves to a
    # symmetric geometry with link distances 50 / 5 / 47.17 for every user.
    sym_central = Layout(
        mode="centralized",
        surface_centers=((3.0, 4.0),),
        tx=_CO_LOCATED_TX,
        rx=_CO_LOCATED_RX,
    )
    outage = _dist_vs_central(
        "fig-outage", m_values=(32,), p_values=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    )
    presets["fig-outage"] = dataclasses.replace(
        outage,
        surface_centers=((25.0, 25.0), (25.0, 75.0), (75.0, 75.0), (75.0, 25.0)),
        methods=(
            MethodSpec(name="distributed", algo="filled"),
            MethodSpec(name="central-sym", algo="filled", surface=sym_central),
        ),
    )

    presets["fig-efficiency"] = _bench("fig-efficiency")

    presets["fig-minrate"] = _bench("fig-minrate", objective="max_min")

    presets["fig-nakagami"] = _bench(
        "fig-nakagami",
        m_values=(8, 16, 32, 64),
        methods=(
            MethodSpec(name="filled", algo="filled"),
            MethodSpec(name="sr", algo="sr"),
            MethodSpec(name="msr", algo="msr"),
        ),
        fading=FadingSpec(kind="nakagami"),
        c0_db=-31.5,
    )

    presets["fig-bound"] = Scenario(
        name="fig-bound",
        k=3,
        n_levels=8,
        tx=((0.0, 0.0),) * 3,
        rx=((25.0, 0.0),) * 3,
        surface_centers=((1.0, 1.0),),
        mode="centralized",
        m_values=(24,),
        p_values_dbm=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0),
        methods=(MethodSpec(name="filled", algo="filled"),),
        trials=DEFAULT_TRIALS,
        seed=DEFAULT_SEED,
        alpha_direct=3.9,
        room=(25.0, 25.0),
        bound_target_sinr=1.0,
    )

    presets["fig-placement"] = Scenario(
        name="fig-placement",
        k=4,
        n_levels=4,
        tx=((0.0, 0.0),) * 4,
        rx=((30.0, 0.0),) * 4,
        surface_centers=((15.0, 1.0),),
        mode="centralized",
        m_values=(8, 16, 32),
        p_values_dbm=(30.0,),
        methods=(
            MethodSpec(name="filled", algo="filled"),
            MethodSpec(name="sr", algo="sr"),
        ),
        # Required-element sweeps rerun the whole grid per probed count, so
        # this preset uses a smaller trial budget than the rate figures.
        trials=16,
        seed=DEFAULT_SEED,
        csi_db=30.0,
        room=(30.0, 30.0),
    )

    return presets


_PRESETS = _build_presets()


def preset_names() -> list:
    return sorted(_PRESETS)


def preset(name: str) -> Scenario:
    try:
        return _PRESETS[name]
    except KeyError:
        known = ", ".join(preset_names())
        raise KeyError(f"unknown preset {name!r}; available: {known}") from None


_SIMPLE_FIELDS = {
    "name": str,
    "k": int,
    "n_levels": int,
    "trials": int,
    "seed": int,
    "csi_db": float,
    "objective": str,
    "mode": str,
    "m_is_total": bool,
    "noise_dbm": float,
    "carrier_hz": float,
    "c0_db": float,
    "alpha_direct": float,
    "alpha_tx_ris": float,
    "alpha_ris_rx": float,
    "outage_gamma": float,
    "corrupt_los": bool,
}


def _as_pairs(values) -> tuple:
    return tuple((float(p[0]), float(p[1])) for p in values)


def _parse_methods(raw) -> tuple:
    methods = []
    for item in raw:
        surface = item.get("surface", "scenario")
        if isinstance(surface, (list, tuple)):
            surface = (surface[0], float(surface[1]), float(surface[2]))
        methods.append(
            MethodSpec(
                name=item["name"],
                algo=item["algo"],
                surface=surface,
                tau=int(item.get("tau", 10)),
                objective=item.get("objective"),
            )
        )
    return tuple(methods)


def _parse_fading(raw) -> FadingSpec:
    return FadingSpec(**raw)


def scenario_from_dict(data: dict) -> Scenario:
    """Build a Scenario from a plain mapping, optionally based on a preset.

    Recognized keys: preset, every simple Scenario field, m_values,
    p_values_dbm, tx, rx, surface_centers, room, methods (list of mappings
    with name/algo/surface/tau/objective), fading (mapping of FadingSpec
    fields), bound_target_sinr.
    """
    data = dict(data)
    base = preset(data.pop("preset")) if "preset" in data else None
    fields = {}
    for key, cast in _SIMPLE_FIELDS.items():
        if key in data:
            fields[key] = cast(data.pop(key))
    if "m_values" in data:
        fields["m_values"] = tuple(int(v) for v in data.pop("m_values"))
    if "p_values_dbm" in data:
        fields["p_values_dbm"] = tuple(float(v) for v in data.pop("p_values_dbm"))
    if "tx" in data:
        fields["tx"] = _as_pairs(data.pop("tx"))
    if "rx" in data:
        raw = data.pop("rx")
        fields["rx"] = None if raw is None else _as_pairs(raw)
    if "surface_centers" in data:
        fields["surface_centers"] = _as_pairs(data.pop("surface_centers"))
    if "room" in data:
        room = data.pop("room")
        fields["room"] = (float(room[0]), float(room[1]))
    if "methods" in data:
        fields["methods"] = _parse_methods(data.pop("methods"))
    if "fading" in data:
        fields["fading"] = _parse_fading(data.pop("fading"))
    if "bound_target_sinr" in data:
        raw = data.pop("bound_target_sinr")
        fields["bound_target_sinr"] = None if raw is None else float(raw)
    if data:
        raise ValueError(f"unknown config keys: {sorted(data)}")
    if base is not None:
        return dataclasses.replace(base, **fields)
    return Scenario(**fields)


def load_scenario(path: str) -> Scenario:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"config {path} must hold a mapping")
    return scenario_from_dict(data)


def resolve_scenario(ref: str) -> Scenario:
    """Scenario from a preset name or a config file path."""
    if ref in _PRESETS:
        return _PRESETS[ref]
    if ref.endswith((".yaml", ".yml")) or "/" in ref:
        return load_scenario(ref)
    raise KeyError(f"unknown scenario {ref!r}; available presets: {', '.join(preset_names())}")
