"""Flat ``key=value`` run configuration files."""

from __future__ import annotations

from lpfc.harness.sweep import CodeSpec, RunConfig
from lpfc.lpfc import LpfcConfig

KEYS = {
    "code.kind", "code.n", "code.dl", "code.dr", "code.path", "code.fixed",
    "sigma.list", "trials", "seed", "decoder", "out", "jobs", "lp.backend", "lpfc.max_iterations",
}


def parse_config(text: str) -> RunConfig:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        values[key] = value

    code = CodeSpec(
        kind=values.get("code.kind", "ensemble"),
        n=int(values.get("code.n", 60)),
        d_l=int(values.get("code.dl", 3)),
        d_r=int(values.get("code.dr", 4)),
        path=values.get("code.path"),
        fixed=values.get("code.fixed", "false").lower() in ("1", "true", "yes"),
    )
    sigmas = tuple(float(s) for s in values.get("sigma.list", "1.0").split(",") if s.strip())
    lpfc = LpfcConfig(
        max_iterations=int(values.get("lpfc.max_iterations", 50)),
        backend=values.get("lp.backend", "highs"),
    )
    return RunConfig(
        code=code,
        sigmas=sigmas,
        trials=int(values.get("trials", 100)),
        seed=int(values.get("seed", 0)),
        decoder=values.get("decoder", "both"),
        out=values.get("out"),
        jobs=int(values.get("jobs", 1)),
        lpfc=lpfc,
    )
