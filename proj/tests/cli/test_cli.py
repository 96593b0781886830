"""CLI contract: exit codes, schema-valid outputs, byte-identical reruns."""

import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

TURAN = sys.argv[1]
SCHEMAS = Path(sys.argv[2])
DEFAULT_CONFIG = Path(sys.argv[3])

failures = []


def check(cond, what):
    print(("PASS " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(*args, expect=0):
    proc = subprocess.run([TURAN, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        print(proc.stdout, proc.stderr)
    check(proc.returncode == expect, f"exit {expect}: {' '.join(args)}")
    return proc


def validate_json(path, name):
    try:
        jsonschema.validate(json.loads(Path(path).read_text()), schema(name))
        check(True, f"{Path(path).name} matches {name}")
    except jsonschema.ValidationError as err:
        check(False, f"{Path(path).name} matches {name}: {err.message}")


def validate_csv(path, name):
    sch = schema(name)
    with open(path, newline="") as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))
    ok = rows and rows[0] == list(sch["properties"])
    for row in rows[1:]:
        record = {}
        for key, cell in zip(rows[0], row):
            if cell == "":
                record[key] = None
                continue
            if sch["properties"].get(key, {}).get("type") == "string":
                record[key] = cell
                continue
            try:
                record[key] = int(cell)
            except ValueError:
                try:
                    record[key] = float(cell)
                except ValueError:
                    record[key] = cell
        try:
            jsonschema.validate(record, sch)
        except jsonschema.ValidationError:
            ok = False
    check(bool(ok) and len(rows) > 1, f"{Path(path).name} matches {name}")


def same_bytes(a, b):
    check(Path(a).read_bytes() == Path(b).read_bytes(), f"{Path(a).name} rerun is byte-identical")


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    validate_json(DEFAULT_CONFIG, "run_config")

    small = json.loads(DEFAULT_CONFIG.read_text())
    small["geometry"]["rows"] = 256
    small["sweep"]["reads_per_row"] = 200
    small["sweep"]["voltages_mv"] = [545, 550, 555]
    small_cfg = tmp / "small.json"
    small_cfg.write_text(json.dumps(small))

    def twice(cmd, name, *args):
        stem, suffix = Path(name).stem, Path(name).suffix
        for tag in ("a", "b"):
            run(cmd, *args, "--out", str(tmp / f"{stem}_{tag}{suffix}"))
        return tmp / f"{stem}_a{suffix}", tmp / f"{stem}_b{suffix}"

    a, b = twice("characterize", "char.json", "--config", str(small_cfg))
    same_bytes(a, b)
    same_bytes(a.with_suffix(".csv"), b.with_suffix(".csv"))
    validate_json(a, "characterization")
    validate_csv(a.with_suffix(".csv"), "characterization_csv")

    a, b = twice("sweep", "sweep.csv", "--config", str(small_cfg), "--axis", "pattern")
    same_bytes(a, b)
    validate_csv(a, "characterization_csv")
    check(len(a.read_text().splitlines()) == 1 + 8 * 3, "pattern sweep covers 8 patterns")

    a, b = twice("generate", "gen.trnb", "--bits", "256", "--seed", "7")
    same_bytes(a, b)
    data = a.read_bytes()
    check(data[:4] == b"TRNB" and int.from_bytes(data[6:14], "little") == 256,
          "generate writes a 256-bit TRNB file")
    c, _ = twice("generate", "gen8.trnb", "--bits", "256", "--seed", "8")
    check(c.read_bytes() != data, "different seeds give different bits")

    a, b = twice("generate", "direct.trnb", "--config", str(small_cfg), "--bits", "2000",
                 "--direct")
    same_bytes(a, b)
    check(a.read_bytes()[5] == 0, "direct stream is flagged unconditioned")

    zeros = tmp / "zeros.trnb"
    zeros.write_bytes(b"TRNB\x01\x00" + (100000).to_bytes(8, "little") + bytes(12500))
    for tag in ("a", "b"):
        proc = run("sts", "--in", str(zeros), "--out", str(tmp / f"sts_{tag}.json"))
    check("fail" in proc.stdout, "all-zero input fails the suite")
    same_bytes(tmp / "sts_a.json", tmp / "sts_b.json")
    same_bytes(tmp / "sts_a.csv", tmp / "sts_b.csv")
    validate_json(tmp / "sts_a.json", "sts_report")
    validate_csv(tmp / "sts_a.csv", "sts_csv")
    check(json.loads((tmp / "sts_a.json").read_text())["verdict"] == "fail", "verdict recorded")

    a, b = twice("perf", "perf.csv", "--freq", "200", "--nread", "32")
    same_bytes(a, b)
    validate_csv(a, "perf_csv")
    row = a.read_text().splitlines()[1].split(",")
    check(float(row[2]) == 1.6e9, "perf row carries 1.6e9 bps")
    a, _ = twice("perf", "perf_all.csv")
    check(len(a.read_text().splitlines()) == 6, "default perf table has five rows")

    a, b = twice("cachesim", "cache.json", "--idle-fraction", "0.3", "--seed", "4")
    same_bytes(a, b)
    validate_json(a, "cachesim_report")
    trace = tmp / "trace.csv"
    trace.write_text("# total_cycles=10000\nstart_cycle,length_cycles\n0,100\n500,2000\n")
    validate_csv(trace, "trace_csv")
    a, b = twice("cachesim", "cache_trace.json", "--trace", str(trace))
    same_bytes(a, b)
    validate_json(a, "cachesim_report")

    a, b = twice("calibrate", "cal.json", "--config", str(small_cfg))
    same_bytes(a, b)
    validate_json(a, "run_config")

    # error paths
    proc = run("sts", "--in", str(tmp / "missing.trnb"), expect=1)
    check("missing.trnb" in proc.stderr and len(proc.stderr.strip().splitlines()) == 1,
          "missing file names its path on one line")
    broken = tmp / "broken.trnb"
    broken.write_bytes(b"TRNX\x01\x00" + bytes(8))
    proc = run("sts", "--in", str(broken), expect=1)
    check("byte offset 3" in proc.stderr, "bad magic reports its byte offset")
    bad = tmp / "bad.json"
    bad.write_text('{"seed": 1, "geometry": {"rows": 4, "colz": 2}}')
    proc = run("perf", "--config", str(bad), expect=1)
    check("colz" in proc.stderr, "unknown config key is rejected")
    bad.write_text('{"seed": 1,\n "x": }')
    proc = run("perf", "--config", str(bad), expect=1)
    check("byte offset" in proc.stderr, "malformed JSON reports a byte offset")
    bad_trace = tmp / "bad.csv"
    bad_trace.write_text("start_cycle,length_cycles\n0,abc\n")
    run("cachesim", "--trace", str(bad_trace), expect=1)
    run("sweep", "--axis", "pressure", expect=2)
    run(expect=2)
    run("generate", "--bits", "-3", expect=2)

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
