#!/usr/bin/env python3
"""Writes the LHCOPN fixture: abstract topology plus a 24-cycle scenario.

Usage: gen_lhcopn_fixture.py [OUTDIR]   (default: fixtures/lhcopn next to this repo's tools/)
"""

import json
import math
import pathlib
import sys

EPOCH = 1791763200  # Monday 2026-10-12 00:00 UTC

# (site, NREN, transit domain, one-way delay to CERN in ms)
TIER1 = [
    ("CA-TRIUMF", "CANARIE", "GEANT", 75.0),
    ("DE-KIT", "DFN", "GEANT", 6.0),
    ("ES-PIC", "RedIRIS", "GEANT", 12.0),
    ("FR-CCIN2P3", "RENATER", "GEANT", 3.0),
    ("IT-INFN-CNAF", "GARR", "GEANT", 7.0),
    ("NDGF", "NORDUnet", "GEANT", 17.0),
    ("NL-T1", "SURFnet", None, 8.0),
    ("TW-ASGC", "ASGCNet", "GEANT", 140.0),
    ("UK-T1-RAL", "JANET", "GEANT", 9.0),
    ("US-FNAL-CMS", "ESnet", "USLHCNet", 50.0),
    ("US-T1-BNL", "ESnet", "USLHCNet", 45.0),
]

MAPPINGS = {
    "CERN": {"up": "UP", "degraded": "DEGRADED", "down": "DOWN", "unknown": "UNKNOWN"},
    "GEANT": {"OK": "UP", "WARN": "DEGRADED", "FAIL": "DOWN"},
    "USLHCNet": {"in-service": "UP", "impaired": "DEGRADED", "out-of-service": "DOWN"},
}
NREN_MAPPING = {"operational": "UP", "degraded": "DEGRADED", "failed": "DOWN"}
ADMIN = {"normal": "NORMAL_OPERATION", "maintenance": "PLANNED_MAINTENANCE", "troubleshooting": "TROUBLESHOOTING"}


def slug(site):
    return site.lower().replace("-", "")


def e2e_id(site, n=1):
    return f"CERN-{site}-LHCOPN-{n:03d}"


def chain(site, nren, transit, variant):
    """Section list (domain, local_id, type, dp_a, dp_b) for one E2E link."""
    s = slug(site) + ("" if variant == 1 else f"{variant}")
    a = f"cern-ccr-{s}"
    z = f"{s}-border"
    secs = []
    if transit is None:
        # Direct cross-border link reported by CERN alone.
        mid = f"cern-{nren.lower()}-{s}"
        secs.append(("CERN", f"cern-dl-{s}", "DOMAIN_LINK", a, mid))
        secs.append(("CERN", f"cern-idl-{s}", "INTER_DOMAIN_LINK", mid, f"{nren.lower()}-cern-{s}"))
        secs.append((nren, f"{nren.lower()}-dl-{s}", "DOMAIN_LINK", f"{nren.lower()}-cern-{s}", z))
        return secs
    t = transit.lower()
    n = nren.lower()
    d1, d2 = f"cern-{t}-{s}", f"{t}-cern-{s}"
    d3, d4 = f"{t}-{n}-{s}", f"{n}-{t}-{s}"
    secs.append(("CERN", f"cern-dl-{s}", "DOMAIN_LINK", a, d1))
    secs.append(("CERN", f"cern-idp-{t}-{s}", "INTER_DOMAIN_LINK_PART", d1, d2))
    secs.append((transit, f"{t}-idp-cern-{s}", "INTER_DOMAIN_LINK_PART", d2, d1))
    secs.append((transit, f"{t}-dl-{s}", "DOMAIN_LINK", d2, d3))
    secs.append((transit, f"{t}-idp-{n}-{s}", "INTER_DOMAIN_LINK_PART", d3, d4))
    secs.append((nren, f"{n}-idp-{t}-{s}", "INTER_DOMAIN_LINK_PART", d4, d3))
    secs.append((nren, f"{n}-dl-{s}", "DOMAIN_LINK", d4, z))
    return secs


def build():
    nodes = [{"id": "CERN", "tier": 0, "position": [500, 320], "hades_node": "hades-cern",
              "bwctl_address": "bwctl.cern.ch"}]
    links = []
    domains = {"CERN": [], "GEANT": [], "USLHCNet": []}
    e2e = []
    node_owd = {"CERN": 0.5}
    for i, (site, nren, transit, owd) in enumerate(TIER1):
        angle = 2 * math.pi * i / len(TIER1)
        nodes.append({"id": site, "tier": 1,
                      "position": [round(500 + 260 * math.cos(angle)), round(320 + 260 * math.sin(angle))],
                      "hades_node": f"hades-{slug(site)}", "bwctl_address": f"bwctl.{slug(site)}.lhcopn.net"})
        node_owd[site] = owd
        variants = [1, 2] if site == "DE-KIT" else [1]
        ids = [e2e_id(site, v) for v in variants]
        links.append({"id": f"CERN--{site}", "endpoints": ["CERN", site], "e2e_link_ids": ids,
                      "ip_interfaces": {"a": f"cern-rtr1.te-{i + 1}", "b": f"{slug(site)}-rtr1.te-1"}})
        for v, lid in zip(variants, ids):
            secs = chain(site, nren, transit, v)
            for dom, local, typ, dpa, dpb in secs:
                domains.setdefault(dom, []).append(
                    {"local_id": local, "e2e_link_id": lid, "link_type": typ, "dp_a": dpa, "dp_b": dpb})
            e2e.append({"id": lid, "productive": True, "endpoints": [secs[0][3], secs[-1][4]]})

    def mapping(name):
        return {"operational": MAPPINGS.get(name, NREN_MAPPING), "administrative": ADMIN}

    domain_list = [{"name": name, "mapping": mapping(name), "links": entries}
                   for name, entries in sorted(domains.items())]

    def ev(cycle, domain, local=None, **kw):
        e = {"cycle": cycle, "domain": domain}
        if local:
            e["local_id"] = local
        e.update(kw)
        return e

    events = [
        # Transit outage on the PIC path: alarm at 5, recovery at 9.
        ev(5, "GEANT", "geant-dl-espic", operational="DOWN"),
        ev(9, "GEANT", "geant-dl-espic", operational="UP"),
        # Planned maintenance on the KIT primary; the DOWN inside it must not notify.
        ev(8, "DFN", "dfn-dl-dekit", administrative="PLANNED_MAINTENANCE"),
        ev(10, "DFN", "dfn-dl-dekit", operational="DOWN"),
        ev(14, "DFN", "dfn-dl-dekit", operational="UP"),
        ev(16, "DFN", "dfn-dl-dekit", administrative="NORMAL_OPERATION"),
        # KIT backup degrades briefly.
        ev(19, "DFN", "dfn-dl-dekit2", operational="DEGRADED"),
        ev(21, "DFN", "dfn-dl-dekit2", operational="UP"),
        # NORDUnet MP outage.
        ev(12, "NORDUnet", reachable=False),
        ev(15, "NORDUnet", reachable=True),
        # Unmapped vendor state on the RAL path.
        ev(18, "JANET", "janet-dl-ukt1ral", vendor_state="flapping"),
        ev(20, "JANET", "janet-dl-ukt1ral", operational="UP"),
        # An interior section goes missing on the CNAF path.
        ev(20, "GEANT", "geant-dl-itinfncnaf", present=False),
        ev(22, "GEANT", "geant-dl-itinfncnaf", present=True),
    ]

    scenario = {
        "seed": 20261012,
        "start_time": EPOCH,
        "period": 300,
        "acceleration": 60.0,
        "topology": "topology.json",
        "domains": domain_list,
        "e2e_links": e2e,
        "events": events,
        "metrics": {
            "node_owd_ms": node_owd,
            "owd_noise_ms": 0.4,
            "jitter_ms": 0.15,
            "jitter_noise_ms": 0.05,
            "throughput_bps": 9.2e9,
            "throughput_noise_bps": 3.0e8,
            "utilization_bps": 3.5e9,
            "utilization_noise_bps": 4.0e8,
            "reroutes": [{"src": "CERN", "dst": "TW-ASGC", "from_cycle": 6, "to_cycle": 10,
                          "hops": ["hades-cern.gw", "backbone", "transpacific-backup", "hades-twasgc.gw"]}],
            "loss_windows": [{"src": "CERN", "dst": "FR-CCIN2P3", "from_cycle": 3, "to_cycle": 5, "loss": 0.02}],
        },
    }
    return {"nodes": nodes, "links": links}, scenario


def main():
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "lhcopn"
    out.mkdir(parents=True, exist_ok=True)
    topology, scenario = build()
    (out / "topology.json").write_text(json.dumps(topology, indent=1) + "\n")
    (out / "scenario.json").write_text(json.dumps(scenario, indent=1) + "\n")
    print(f"wrote {out}/topology.json and {out}/scenario.json")


if __name__ == "__main__":
    main()
