"""Command-line front end: every analysis as a subcommand.

Exit codes: 0 success, 2 validation error, 3 missing data dependency
(attenuation table rows, puncturing file, threshold cache). Errors print
to stderr with a machine-parsable `E<code>:` prefix. All CSV output uses
'.' decimals, LF line endings, UTF-8.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from relaylink import analyses
from relaylink.datafiles import resolve
from relaylink.errors import DataCoverageError, RelaylinkError
from relaylink.optical import render_optical_budget
from relaylink.orbital import (
    combined_min_angles,
    load_elements,
    min_angle_for_loss,
    outage_percentages,
    sdp_spd_series,
    series_to_csv,
)
from relaylink.scenario import (
    attenuation_table_for,
    load_scenario,
    optical_budget_inputs,
    validate,
)
from relaylink.scppm.config import ScppmConfig
from relaylink.scppm.decoder import decode
from relaylink.scppm.encoder import encode
from relaylink.scppm.channel import poisson_channel
from relaylink.scppm import fer as fer_mod

THRESHOLD_CACHE_FILENAME = "scppm_thresholds.csv"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help()
        return 2
    try:
        output = args.handler(args)
    except DataCoverageError as exc:
        print(f"E3: {exc}", file=sys.stderr)
        return 3
    except RelaylinkError as exc:
        print(f"E2: {exc}", file=sys.stderr)
        return 2
    if output is not None:
        if args.output:
            Path(args.output).write_text(output, encoding="utf-8", newline="\n")
        else:
            sys.stdout.write(output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaylink",
        description="Link engineering for two-leg deep-space relay architectures.",
    )
    sub = parser.add_subparsers(dest="command")

    p = _command(sub, "direct", "Direct-link budget and achievable data rate.")
    p.add_argument("--scenario", required=True,
                   help="scenario file path or built-in name")
    p.set_defaults(handler=cmd_direct)

    p = _command(sub, "transparent-sweep",
                 "Transparent two-leg output versus leg-1 frequency (CSV).")
    p.add_argument("--scenario", default="mars-relay-ehf",
                   help="two-leg scenario (default mars-relay-ehf)")
    p.add_argument("--direct-scenario", default=None,
                   help="direct reference scenario (default <target>-direct-x)")
    p.add_argument("--theta-max-deg", type=float, nargs="+", default=[0.1, 0.05, 0.01],
                   help="spacecraft worst-case pointing errors in degrees")
    p.add_argument("--f1-min-ghz", type=float, default=1.0, help="sweep start in GHz")
    p.add_argument("--f1-max-ghz", type=float, default=90.0, help="sweep end in GHz")
    p.add_argument("--f1-step-ghz", type=float, default=0.5, help="grid step in GHz")
    p.add_argument("--noise-bandwidth-hz", type=float, default=None,
                   help="receiver equivalent noise bandwidth in Hz "
                        "(default: twice the reference data rate)")
    p.set_defaults(handler=cmd_transparent_sweep)

    p = _command(sub, "leg2", "Relay-to-ground Eb/N0 and minimum ground dish.")
    p.add_argument("--scenario", default="uranus-relay-ehf",
                   help="two-leg scenario providing the relay-to-ground leg")
    p.add_argument("--rate-kbps", type=float, default=None,
                   help="data rate in kbps (default: the target's direct-link rate)")
    p.add_argument("--ground-dish-m", type=float, nargs="+", default=[35.0, 15.0, 2.4],
                   help="ground dish diameters in meters")
    p.add_argument("--min-dish", action="store_true",
                   help="also solve the smallest dish reaching the Eb/N0 target")
    p.add_argument("--target-db", type=float,
                   default=analyses.LEG2_REQUIRED_PLUS_MARGIN_DB,
                   help="required-plus-margin Eb/N0 target in dB")
    p.set_defaults(handler=cmd_leg2)

    p = _command(sub, "leg1-crossing",
                 "Leg-1 frequency where the two-leg link matches the direct one.")
    p.add_argument("--scenario", default="uranus-relay-ehf",
                   help="two-leg scenario providing leg-1")
    p.add_argument("--direct-scenario", default=None,
                   help="direct reference scenario (default <target>-direct-x)")
    p.add_argument("--dish-m", type=float, nargs="+", default=[3.0, 4.0, 5.0],
                   help="relay receive dish diameters in meters")
    p.add_argument("--availability-pct", type=float, nargs="+", default=[95.0],
                   help="direct-link availabilities in percent")
    p.add_argument("--theta-max-deg", type=float, default=0.01,
                   help="spacecraft worst-case pointing error in degrees")
    p.set_defaults(handler=cmd_leg1_crossing)

    p = _command(sub, "optical-budget", "Optical leg-1 budget ledger.")
    p.add_argument("--scenario", default="venus-optical",
                   help="optical scenario file path or built-in name")
    p.set_defaults(handler=cmd_optical_budget)

    p = _command(sub, "optical-maxrange",
                 "Maximum optical range per pointing accuracy and PPM order.")
    p.add_argument("--mode", choices=["deterministic", "probabilistic"],
                   default="probabilistic",
                   help="pointing treatment (worst-case angle or accuracy+outage)")
    p.add_argument("--accuracy-urad", type=float, nargs="+",
                   default=[1.0, 0.5, 0.35, 0.2, 0.15, 0.1, 0.05],
                   help="pointing accuracies in microradians")
    p.add_argument("--orders", type=int, nargs="+", default=[256, 64, 32, 16, 4],
                   help="PPM orders (columns)")
    p.add_argument("--rate", default="1/3", help="convolutional code rate")
    p.add_argument("--ts-ns", type=float, default=256.0, help="slot time in ns")
    p.add_argument("--nb-phe-s", type=float, default=1.21e7,
                   help="background flux in photoelectrons per second")
    p.add_argument("--target-fer", type=float, default=9e-5,
                   help="frame error rate target")
    p.add_argument("--wavelength-nm", type=float, default=1064.0)
    p.add_argument("--average-power-w", type=float, default=5.0)
    p.add_argument("--outage", type=float, default=0.05,
                   help="pointing outage target (probabilistic mode)")
    p.add_argument("--threshold-cache", default=None,
                   help="required-flux cache CSV (default: packaged cache)")
    p.set_defaults(handler=cmd_optical_maxrange)

    p = _command(sub, "scppm-fer", "Monte Carlo frame error rate curve (CSV).")
    p.add_argument("--m", type=int, required=True, help="PPM order")
    p.add_argument("--rate", default="1/2", help="code rate: 1/3, 1/2, or 2/3")
    p.add_argument("--ts-ns", type=float, default=16.0, help="slot time in ns")
    p.add_argument("--nb", type=float, default=0.2,
                   help="background photons per slot")
    p.add_argument("--flux-db", type=float, nargs="+", required=True,
                   help="signal fluxes in dB photons/ns")
    p.add_argument("--frames", type=int, default=500, help="frames per point")
    p.add_argument("--iterations", type=int, default=25)
    p.set_defaults(handler=cmd_scppm_fer)

    p = _command(sub, "scppm-threshold",
                 "Search the minimum flux meeting a FER target; cache the result.")
    p.add_argument("--m", type=int, required=True, help="PPM order")
    p.add_argument("--rate", default="1/3", help="code rate: 1/3, 1/2, or 2/3")
    p.add_argument("--ts-ns", type=float, default=256.0, help="slot time in ns")
    p.add_argument("--nb-phe-s", type=float, default=1.21e7,
                   help="background flux in photoelectrons per second")
    p.add_argument("--target-fer", type=float, default=9e-5)
    p.add_argument("--frames", type=int, default=2000, help="frames per fine point")
    p.add_argument("--coarse-frames", type=int, default=300,
                   help="frames per point while the bracket is wide")
    p.add_argument("--bracket-db", type=float, nargs=2, default=[-45.0, -20.0],
                   help="search bracket in dB photons/ns")
    p.add_argument("--cache", default=None,
                   help="cache CSV to update (default: alongside the output)")
    p.set_defaults(handler=cmd_scppm_threshold)

    p = _command(sub, "orbital-outage",
                 "Sun-geometry outage statistics over a mission horizon.")
    p.add_argument("--targets", nargs="+",
                   default=["venus", "mars", "uranus", "neptune"])
    p.add_argument("--placement", choices=["earth", "l4", "l5"], default="l5")
    p.add_argument("--thresholds-deg", type=float, nargs="+",
                   default=[40.0, 10.0, 3.0, 1.0])
    p.add_argument("--loss-pct", type=float, default=10.0,
                   help="availability loss for the minimum-angle figure")
    p.add_argument("--years", type=float, default=100.0)
    p.add_argument("--step-days", type=float, default=1.0)
    p.add_argument("--start-jd", type=float, default=2460676.5,
                   help="first epoch as a Julian date (TDB)")
    p.add_argument("--series-csv", default=None,
                   help="also export per-epoch angles for the first target")
    p.set_defaults(handler=cmd_orbital_outage)

    p = _command(sub, "mass", "Optical-terminal mass model and aperture limits.")
    p.add_argument("--average-power-w", type=float, default=5.0,
                   help="laser average optical power in watts")
    p.add_argument("--dry-mass-kg", type=float, default=None,
                   help="custom spacecraft dry mass in kg")
    p.add_argument("--comm-fraction", type=float, default=0.065,
                   help="communication subsystem mass fraction")
    p.add_argument("--leg1-fraction", type=float, default=1.0,
                   help="share of the comm mass allocated to leg 1")
    p.set_defaults(handler=cmd_mass)

    p = _command(sub, "scppm-bench",
                 "Benchmark the compiled decoder kernels against the fallback.")
    p.add_argument("--m", type=int, default=64, help="PPM order")
    p.add_argument("--rate", default="1/2", help="code rate")
    p.add_argument("--frames", type=int, default=3, help="frames per backend")
    p.set_defaults(handler=cmd_scppm_bench)

    return parser


def _command(sub, name, help_text):
    p = sub.add_parser(name, help=help_text, description=help_text)
    p.add_argument("--format", choices=["text", "csv"], default="text",
                   help="output format")
    p.add_argument("--output", default=None, help="write output to this path")
    p.add_argument("--seed", type=int, default=0,
                   help="master random seed (default 0)")
    p.add_argument("--workers", type=int, default=1,
                   help="worker process count for Monte Carlo runs")
    return p


def _load_validated(name):
    scenario = load_scenario(name)
    findings = validate(scenario)
    if findings:
        raise RelaylinkError("; ".join(findings))
    return scenario


def cmd_direct(args):
    scenario = _load_validated(args.scenario)
    table = attenuation_table_for(scenario)
    report = analyses.direct_link_report(scenario, table)
    return report.to_csv() if args.format == "csv" else report.to_text()


def cmd_transparent_sweep(args):
    scenario = _load_validated(args.scenario)
    direct = _load_validated(
        args.direct_scenario or f"{scenario.target_body}-direct-x"
    )
    table = attenuation_table_for(scenario)
    grid = np.arange(args.f1_min_ghz, args.f1_max_ghz + 1e-9, args.f1_step_ghz) * 1e9
    lines = ["f1_ghz,direct_db_hz," + ",".join(
        f"two_leg_db_hz_theta_{t:g}deg" for t in args.theta_max_deg
    )]
    sweeps = [
        analyses.transparent_sweep(scenario, direct, theta, table, grid,
                                   args.noise_bandwidth_hz)
        for theta in args.theta_max_deg
    ]
    for i, f1 in enumerate(grid):
        row = [f"{f1 / 1e9:.4f}", f"{sweeps[0][i].direct_db_hz:.4f}"]
        row += [f"{sweep[i].two_leg_db_hz:.4f}" for sweep in sweeps]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def cmd_leg2(args):
    scenario = _load_validated(args.scenario)
    table = attenuation_table_for(scenario)
    rate_kbps = args.rate_kbps
    if rate_kbps is None:
        rate_kbps = analyses.REFERENCE_RATES_KBPS.get(scenario.target_body)
        if rate_kbps is None:
            raise RelaylinkError(
                f"no reference data rate for {scenario.target_body!r}; "
                "pass --rate-kbps"
            )
    rows = []
    for dish in args.ground_dish_m:
        value = analyses.leg2_eb_n0_db(scenario, table, rate_kbps * 1e3,
                                       ground_dish_m=dish)
        rows.append((dish, value))
    out = []
    if args.format == "csv":
        out.append("ground_dish_m,eb_n0_db")
        out += [f"{d:.4f},{v:.4f}" for d, v in rows]
    else:
        out.append(f"Leg-2 Eb/N0 at {rate_kbps:g} kbps ({scenario.name})")
        out += [f"  dish {d:6.2f} m -> {v:8.2f} dB" for d, v in rows]
    if args.min_dish:
        dish = analyses.minimum_ground_dish_m(scenario, table, rate_kbps * 1e3,
                                              args.target_db)
        if args.format == "csv":
            out.append(f"min_dish_m,{dish:.4f}")
        else:
            out.append(f"  minimum dish for {args.target_db:g} dB: {dish:.2f} m")
    return "\n".join(out) + "\n"


def cmd_leg1_crossing(args):
    scenario = _load_validated(args.scenario)
    direct = _load_validated(
        args.direct_scenario or f"{scenario.target_body}-direct-x"
    )
    table = attenuation_table_for(scenario)
    rows = analyses.crossing_table(
        scenario, direct, args.dish_m, args.availability_pct,
        args.theta_max_deg, table,
    )
    out = []
    if args.format == "csv":
        out.append("relay_dish_m,availability_pct,crossing_ghz")
        for row in rows:
            value = "" if row.crossing_hz is None else f"{row.crossing_hz / 1e9:.2f}"
            out.append(f"{row.relay_dish_m:g},{row.availability_pct:g},{value}")
    else:
        out.append(f"Crossing frequencies ({scenario.name}, "
                   f"theta_max {args.theta_max_deg:g} deg)")
        for row in rows:
            value = ("no crossing" if row.crossing_hz is None
                     else f"{row.crossing_hz / 1e9:6.1f} GHz")
            out.append(f"  dish {row.relay_dish_m:4.1f} m @ "
                       f"{row.availability_pct:6.2f}%: {value}")
    return "\n".join(out) + "\n"


def cmd_optical_budget(args):
    scenario = _load_validated(args.scenario)
    leg = scenario.leg1
    inputs, params = optical_budget_inputs(scenario)
    required = leg.required_flux_db_phe_ns
    if required is None:
        cache = fer_mod.load_threshold_cache(resolve(THRESHOLD_CACHE_FILENAME))
        key = (leg.ppm_order, leg.code_rate, leg.slot_time_ns,
               leg.background_flux_phe_per_ns * 1e9, leg.target_fer)
        if key not in cache:
            raise DataCoverageError(
                f"scenario gives no required flux and the cache has no entry "
                f"for {key}; run scppm-threshold"
            )
        required = cache[key]
    report = render_optical_budget(
        inputs, params, required, leg.target_fer,
        title=f"Optical link budget: {scenario.name}",
    )
    return report.to_csv() if args.format == "csv" else report.to_text()


def cmd_optical_maxrange(args):
    cache_path = args.threshold_cache or resolve(THRESHOLD_CACHE_FILENAME)
    cache = fer_mod.load_threshold_cache(cache_path)
    cells = analyses.max_range_table(
        args.accuracy_urad, args.orders, args.mode, cache,
        code_rate=args.rate, slot_time_ns=args.ts_ns, nb_phe_s=args.nb_phe_s,
        target_fer=args.target_fer, wavelength_nm=args.wavelength_nm,
        average_power_w=args.average_power_w, outage_target=args.outage,
    )
    by_acc = {}
    for cell in cells:
        by_acc.setdefault(cell.accuracy_urad, {})[cell.ppm_order] = cell
    out = []
    if args.format == "csv":
        out.append("accuracy_urad," + ",".join(f"range_au_m{m}" for m in args.orders))
        for acc in args.accuracy_urad:
            row = [f"{acc:g}"]
            row += [f"{by_acc[acc][m].range_au:.3f}" for m in args.orders]
            out.append(",".join(row))
        rates = [f"{by_acc[args.accuracy_urad[0]][m].data_rate_kbps:.2f}"
                 for m in args.orders]
        out.append("data_rate_kbps," + ",".join(rates))
    else:
        label = ("sigma_theta" if args.mode == "probabilistic" else "theta_max")
        out.append(f"Maximum range in AU versus {label} (urad), by PPM order")
        out.append("  accuracy " + "".join(f"{m:>10d}" for m in args.orders))
        for acc in args.accuracy_urad:
            row = f"{acc:9.2f} " + "".join(
                f"{by_acc[acc][m].range_au:10.3f}" for m in args.orders
            )
            out.append(row)
        out.append("  kbps     " + "".join(
            f"{by_acc[args.accuracy_urad[0]][m].data_rate_kbps:10.2f}"
            for m in args.orders
        ))
    return "\n".join(out) + "\n"


def cmd_scppm_fer(args):
    cfg = ScppmConfig(ppm_order=args.m, code_rate=args.rate,
                      slot_time_s=args.ts_ns * 1e-9, iterations=args.iterations)
    points = fer_mod.fer_sweep(cfg, args.nb, args.flux_db, args.frames,
                               args.seed, workers=args.workers)
    return fer_mod.points_to_csv(points)


def cmd_scppm_threshold(args):
    cfg = ScppmConfig(ppm_order=args.m, code_rate=args.rate,
                      slot_time_s=args.ts_ns * 1e-9)
    nb_per_slot = args.nb_phe_s * cfg.slot_time_s
    ns_star, history = fer_mod.required_flux(
        cfg, nb_per_slot, args.target_fer, args.seed,
        frames_per_point=args.frames, coarse_frames=args.coarse_frames,
        bracket_db=tuple(args.bracket_db), workers=args.workers,
    )
    if args.cache:
        cache = fer_mod.load_threshold_cache(args.cache)
        cache[(args.m, args.rate, args.ts_ns, args.nb_phe_s, args.target_fer)] = ns_star
        fer_mod.save_threshold_cache(args.cache, cache)
    lines = [fer_mod.points_to_csv(history).rstrip("\n")]
    lines.append(f"# ns_star_db,{ns_star:.4f}")
    return "\n".join(lines) + "\n"


def cmd_orbital_outage(args):
    bodies = load_elements(resolve("planetary_elements.csv"))
    try:
        earth = bodies["earth"]
        targets = {name: bodies[name] for name in args.targets}
    except KeyError as exc:
        raise RelaylinkError(f"unknown body {exc}") from exc
    out = []
    csv_mode = args.format == "csv"
    if csv_mode:
        out.append("target,angle,"
                   + ",".join(f"outage_pct_below_{t:g}deg" for t in args.thresholds_deg)
                   + f",min_angle_deg_at_{args.loss_pct:g}pct"
                   + ",combined_min_deg")
    series_csv = None
    for name, body in targets.items():
        series = sdp_spd_series(body, earth, args.placement, args.start_jd,
                                args.years, args.step_days)
        if series_csv is None and args.series_csv:
            series_csv = series_to_csv(series)
        combined = combined_min_angles(body, earth, args.start_jd,
                                       args.years, args.step_days)
        for label, angles, comb in (("sdp", series.sdp_deg, combined[0]),
                                    ("spd", series.spd_deg, combined[1])):
            outages = outage_percentages(angles, args.thresholds_deg)
            min_angle = min_angle_for_loss(angles, args.loss_pct)
            if csv_mode:
                out.append(f"{name},{label},"
                           + ",".join(f"{o:.2f}" for o in outages)
                           + f",{min_angle:.2f},{comb:.2f}")
            else:
                pieces = ", ".join(
                    f"<{t:g}deg: {o:.2f}%"
                    for t, o in zip(args.thresholds_deg, outages)
                )
                out.append(f"{name:8s} {label.upper()}: {pieces}; "
                           f"min@{args.loss_pct:g}% loss: {min_angle:.2f} deg; "
                           f"combined L5+direct min: {comb:.2f} deg")
    if series_csv is not None:
        Path(args.series_csv).write_text(series_csv, encoding="utf-8", newline="\n")
    return "\n".join(out) + "\n"


def cmd_mass(args):
    if args.dry_mass_kg is not None:
        from relaylink.massmodel import MassBudget, laser_mass, max_diameter
        budget = MassBudget(args.dry_mass_kg, args.comm_fraction, args.leg1_fraction)
        diameter = max_diameter(budget, args.average_power_w)
        if args.format == "csv":
            return ("allocation_kg,laser_kg,max_diameter_cm\n"
                    f"{budget.allocation_kg:.3f},"
                    f"{laser_mass(args.average_power_w):.3f},{diameter:.2f}\n")
        return (f"allocation {budget.allocation_kg:.1f} kg, laser "
                f"{laser_mass(args.average_power_w):.2f} kg, "
                f"max aperture {diameter:.1f} cm\n")
    rows = analyses.mass_table(args.average_power_w)
    out = []
    if args.format == "csv":
        out.append("class,allocation_kg,laser_kg,head_kg,max_diameter_cm")
        for row in rows:
            out.append(f"{row.label},{row.allocation_kg:.3f},{row.laser_kg:.3f},"
                       f"{row.head_kg:.3f},{row.diameter_cm:.2f}")
    else:
        out.append(f"Optical terminal aperture limits at "
                   f"{args.average_power_w:g} W average power")
        for row in rows:
            out.append(f"  {row.label:18s} {row.allocation_kg:7.1f} kg -> "
                       f"{row.diameter_cm:6.1f} cm")
        out.append("  note: upper-end class figures follow the mass formula; "
                   "published roundings differ by up to ~9%.")
    return "\n".join(out) + "\n"


def cmd_scppm_bench(args):
    from relaylink.scppm import _kernels_py
    from relaylink.scppm import decoder as decoder_mod

    cfg = ScppmConfig(ppm_order=args.m, code_rate=args.rate, slot_time_s=16e-9)
    rng = np.random.default_rng(args.seed)
    info = rng.integers(0, 2, cfg.info_bits, dtype=np.uint8)
    counts = poisson_channel(encode(info, cfg), 2.0, 0.2, cfg.ppm_order, rng)

    results = []
    available = dict(python=_kernels_py)
    try:
        from relaylink.scppm import _kernels as compiled
        available["compiled"] = compiled
    except ImportError:
        pass
    original = decoder_mod._kernels
    try:
        for name, module in available.items():
            decoder_mod._kernels = module
            start = time.perf_counter()
            for _ in range(args.frames):
                decode(counts, 2.0, 0.2, cfg)
            elapsed = (time.perf_counter() - start) / args.frames
            results.append((name, elapsed))
    finally:
        decoder_mod._kernels = original
    out = [f"decode benchmark: M={args.m}, R={args.rate}, "
           f"{cfg.iterations} iterations, {args.frames} frames/backend"]
    for name, elapsed in results:
        out.append(f"  {name:9s} {elapsed * 1e3:9.1f} ms/frame")
    if len(results) == 2:
        ratio = results[0][1] / results[1][1]
        out.append(f"  speedup: {ratio:.1f}x" if ratio > 1
                   else f"  speedup: {1 / ratio:.1f}x")
    return "\n".join(out) + "\n"


if __name__ == "__main__":
    sys.exit(main())
