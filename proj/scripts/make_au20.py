#!/usr/bin/env python3
"""Generate the bundled 20-site synthetic Australian scenario.

Everything here is synthetic: city coordinates are real, but temperatures,
grid intensities and prices are smooth stand-ins chosen to be plausible,
not measured. Output is deterministic.
"""

import argparse
import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "scenarios" / "au20"
EPOCHS = 24

# site_id, state, lat, lon, mean temp C, diurnal amplitude C
SITES = [
    ("adelaide", "sa", -34.93, 138.60, 23.0, 7.0),
    ("ballarat", "vic", -37.56, 143.85, 15.0, 7.0),
    ("bendigo", "vic", -36.76, 144.28, 19.0, 8.0),
    ("brisbane", "qld", -27.47, 153.03, 26.0, 5.0),
    ("cairns", "qld", -16.92, 145.77, 29.0, 4.0),
    ("canberra", "act", -35.28, 149.13, 18.0, 9.0),
    ("darwin", "nt", -12.46, 130.84, 31.0, 4.0),
    ("geelong", "vic", -38.15, 144.36, 18.0, 6.0),
    ("goldcoast", "qld", -28.02, 153.40, 25.0, 5.0),
    ("hobart", "tas", -42.88, 147.33, 14.0, 5.0),
    ("kalgoorlie", "wa", -30.75, 121.47, 27.0, 9.0),
    ("launceston", "tas", -41.43, 147.14, 15.0, 6.0),
    ("melbourne", "vic", -37.81, 144.96, 19.0, 6.0),
    ("mtgambier", "sa", -37.83, 140.78, 17.0, 6.0),
    ("newcastle", "nsw", -32.93, 151.78, 22.0, 5.0),
    ("perth", "wa", -31.95, 115.86, 25.0, 7.0),
    ("sydney", "nsw", -33.87, 151.21, 22.0, 5.0),
    ("townsville", "qld", -19.26, 146.82, 29.0, 4.0),
    ("wagga", "nsw", -35.12, 147.37, 24.0, 9.0),
    ("wollongong", "nsw", -34.42, 150.89, 21.0, 5.0),
]

# Demand regions are states, located at their capitals.
REGIONS = {
    "nsw": (-33.87, 151.21, 0.31),
    "vic": (-37.81, 144.96, 0.26),
    "qld": (-27.47, 153.03, 0.20),
    "wa": (-31.95, 115.86, 0.11),
    "sa": (-34.93, 138.60, 0.07),
    "tas": (-42.88, 147.33, 0.02),
    "act": (-35.28, 149.13, 0.02),
    "nt": (-12.46, 130.84, 0.01),
}

# state: carbon intensity kg/kWh, solar share of CI dip at noon,
#        water intensity L/kWh, base TOU price $/kWh
GRID = {
    "nsw": (0.68, 0.15, 1.8, 0.28),
    "act": (0.68, 0.15, 1.8, 0.26),
    "vic": (0.79, 0.10, 1.4, 0.25),
    "qld": (0.73, 0.20, 1.9, 0.27),
    "sa": (0.25, 0.40, 0.7, 0.33),
    "wa": (0.51, 0.25, 1.1, 0.29),
    "tas": (0.16, 0.05, 0.9, 0.26),
    "nt": (0.54, 0.20, 0.8, 0.30),
}


def haversine_km(a, b):
    lat1, lon1 = map(math.radians, a)
    lat2, lon2 = map(math.radians, b)
    h = (math.sin((lat2 - lat1) / 2) ** 2
         + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2)
    return 2 * 6371.0 * math.asin(math.sqrt(h))


def latency_s(region, site):
    _, state, lat, lon, *_ = site
    if state == region:
        return 0.002
    rlat, rlon, _ = REGIONS[region]
    # fibre at ~200 km/ms with 1.5x route inflation, plus a fixed hop cost
    return round(0.004 + 1.5 * haversine_km((rlat, rlon), (lat, lon)) / 200000.0, 6)


def daylight(hour):
    return max(0.0, math.sin(math.pi * (hour - 6) / 12.0))


def tou_multiplier(hour):
    if 16 <= hour < 21:
        return 1.6
    if hour < 7:
        return 0.7
    return 1.0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--load-scale", type=float, default=1.0,
                    help="multiplies the hourly request rates (sensitivity runs)")
    ap.add_argument("--out", type=pathlib.Path, default=OUT)
    args = ap.parse_args()
    out = args.out
    scale = args.load_scale
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "environment.csv", "w") as f:
        f.write("site_id,epoch,ambient_temp_c,tou_price_per_kwh,carbon_intensity_kg_per_kwh,"
                "water_intensity_l_per_kwh,potable_ei_kwh_per_l,wastewater_ei_kwh_per_l\n")
        for site_id, state, _, _, mean_t, amp in SITES:
            ci, solar, wi, price = GRID[state]
            for e in range(EPOCHS):
                temp = mean_t + amp * math.sin(2 * math.pi * (e - 9) / 24.0)
                f.write(f"{site_id},{e},{temp:.2f},{price * tou_multiplier(e):.4f},"
                        f"{ci * (1 - solar * daylight(e)):.4f},{wi},0.004,0.001\n")

    with open(out / "latency.csv", "w") as f:
        f.write("origin_region,site_id,latency_s\n")
        for region in REGIONS:
            for site in SITES:
                f.write(f"{region},{site[0]},{latency_s(region, site)}\n")

    rates = [round(scale * (150 + 300 * daylight((e + 1) % 24) ** 0.7), 1) for e in range(EPOCHS)]
    scenario = {
        "schema_version": 1,
        "name": "au20-synthetic",
        "description": "20 synthetic Australian sites, 200 nodes each, 24 one-hour epochs",
        "epoch_hours": 1.0,
        "idle_floor_nodes": 4,
        "seed": 42,
        "site_defaults": {
            "node_count": 200,
            "node": {"tdp_w": 3200, "bandwidth_bytes_per_s": 25e9, "gpu_count": 8,
                     "memory_bytes": 640e9},
            "state_profile": {"on": 1.0, "idle": 0.3, "off": 0.0},
            "water": {"heat_capacity_kwh_per_l": 0.68, "blowdown_ratio": 0.2},
            "cop_curve": [{"temp_c": -3.9, "ppue": 1.05}, {"temp_c": 35.0, "ppue": 1.30}],
        },
        "sites": [{"site_id": s[0], "region": s[1]} for s in SITES],
        "models": [
            {"model_id": "llm-7b", "param_bytes": 14e9, "kv_bytes_per_token": 524288,
             "prefill_tokens_per_s": 4000},
            {"model_id": "llm-13b", "param_bytes": 26e9, "kv_bytes_per_token": 819200,
             "prefill_tokens_per_s": 2500},
        ],
        "environment": "environment.csv",
        "latency": "latency.csv",
        "trace": {"synthetic": {
            "epochs": EPOCHS,
            "mean_rate": rates,
            "input_tokens": {"log_mean": 6.9, "log_sigma": 0.7, "max_tokens": 8192},
            "output_tokens": {"log_mean": 5.5, "log_sigma": 0.7, "max_tokens": 2048},
            "model_mix": {"llm-7b": 0.7, "llm-13b": 0.3},
            "region_mix": {r: w for r, (_, _, w) in REGIONS.items()},
        }},
        "admm": {"rho": 1.0, "max_iters": 1000, "eps_primal": 1e-4, "eps_dual": 1e-4},
        "runs": ["opt-cost", "opt-carbon", "opt-water", "opt-ttft", "opt-balance",
                 "queue-split", "flow-greedy"],
        "normalize_against": "queue-split",
    }
    with open(out / "scenario.json", "w") as f:
        json.dump(scenario, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
