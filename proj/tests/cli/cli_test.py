"""End-to-end tests of the ncrw command line tool.

Usage: cli_test.py NCRW_BINARY SCHEMA_DIR [unittest args...]
"""

import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

NCRW = None
SCHEMAS = None


def run(*args, env=None, check=True):
    full_env = dict(os.environ)
    full_env.pop("NCRW_CONFIG", None)
    if env:
        full_env.update(env)
    proc = subprocess.run([NCRW, *args], capture_output=True, text=True, env=full_env)
    if check and proc.returncode != 0:
        raise AssertionError(f"ncrw {' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return proc


def schema(name):
    with open(os.path.join(SCHEMAS, name + ".json")) as f:
        return json.load(f)


class Examples(unittest.TestCase):
    def test_stationary_sine_value(self):
        out = run("kernel", "--spec", "stationary:0.5", "--dt", "0", "--dx", "1").stdout
        self.assertEqual(out.strip(), "0.31830988618379069")
        self.assertAlmostEqual(float(out), 1 / math.pi, places=16)

    def test_density_at_time_zero(self):
        out = run("density", "--spec", "finite:0,2", "--t", "0", "--window", "-3:5").stdout
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "t,x,rho")
        rho = {int(l.split(",")[1]): float(l.split(",")[2]) for l in lines[1:]}
        self.assertEqual(sorted(rho), list(range(-3, 6)))
        for x, r in rho.items():
            self.assertEqual(r, 1.0 if x in (0, 2) else 0.0)

    def test_simulate_dmr_z_score(self):
        out = run("simulate", "--config", "0,2", "--T", "1", "--at", "0.5:0", "--estimator",
                  "dmr", "--samples", "100000", "--seed", "7").stdout
        doc = json.loads(out)
        self.assertLessEqual(abs(doc["z_score"]), 3.0)
        self.assertEqual(doc["n_samples"], 100000)

    def test_kernel_points_and_gauges(self):
        prob = float(run("kernel", "--spec", "finite:0,2", "--point", "0.5,0", "--point", "1,2",
                         "--gauge", "prob").stdout)
        paper = float(run("kernel", "--spec", "finite:0,2", "--point", "0.5,0", "--point", "1,2",
                          "--gauge", "paper").stdout)
        self.assertAlmostEqual(paper, prob * math.exp(0.5 - 1.0), places=15)

    def test_kernel_grid_csv(self):
        lines = run("kernel", "--spec", "lattice:2", "--grid", "--times", "0,0.5",
                    "--window", "0:1").stdout.strip().splitlines()
        self.assertEqual(lines[0], "s,x,t,y,value")
        self.assertEqual(len(lines), 1 + 16)

    def test_relaxation_csv(self):
        lines = run("relaxation", "--a", "2", "--dt", "0", "--dx-max", "2",
                    "--tau", "4,8").stdout.strip().splitlines()
        self.assertEqual(lines[0], "tau,dt,dx,lattice_value,stationary_value,gap")
        self.assertEqual(len(lines), 1 + 3 * 2)
        for line in lines[1:]:
            tau, dt, dx, lat, sta, gap = line.split(",")
            self.assertAlmostEqual(float(gap), abs(float(lat) - float(sta)), places=15)


class ExitCodes(unittest.TestCase):
    def test_usage_errors_exit_2(self):
        cases = [
            [],
            ["nosuch"],
            ["kernel", "--spec", "circle:3", "--point", "0,0", "--point", "0,0"],
            ["kernel", "--spec", "finite:0,2", "--point", "0,0"],
            ["--tol-quad", "1e-2", "kernel", "--spec", "stationary:0.5", "--dt", "0", "--dx", "0"],
            ["--threads", "0", "relaxation"],
            ["density", "--spec", "finite:2,0", "--t", "1", "--window", "0:3"],
            ["density", "--spec", "finite:0,2", "--t", "1", "--window", "3:0"],
            ["relaxation", "--a", "1"],
            ["simulate", "--config", "0,2", "--at", "0.5:0", "--estimator", "x"],
        ]
        for args in cases:
            with self.subTest(args=args):
                proc = run(*args, check=False)
                self.assertEqual(proc.returncode, 2, proc.stderr)
                self.assertTrue(proc.stderr.strip())

    def test_usage_error_names_flag(self):
        proc = run("--tol-quad", "1e-2", "kernel", "--spec", "stationary:0.5", "--dt", "0",
                   "--dx", "0", check=False)
        self.assertIn("--tol-quad", proc.stderr)

    def test_convergence_failure_exit_1(self):
        proc = run("kernel", "--spec", "finite:0,2", "--point", "0.5,0", "--point", "1e9,1",
                   check=False)
        self.assertEqual(proc.returncode, 1, proc.stderr + proc.stdout)
        self.assertTrue(proc.stderr.strip())


class OutputPlumbing(unittest.TestCase):
    def test_out_writes_file(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "k.txt")
            proc = run("--out", path, "kernel", "--spec", "stationary:0.5", "--dt", "0",
                       "--dx", "1")
            self.assertEqual(proc.stdout, "")
            with open(path) as f:
                self.assertEqual(f.read().strip(), "0.31830988618379069")

    def test_config_file_precedence(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "ncrw.conf")
            with open(path, "w") as f:
                f.write("output=json\nseed=5\n")
            args = ["simulate", "--config", "0,2", "--at", "0.5:0", "--samples", "2000"]
            from_file = json.loads(run(*args, env={"NCRW_CONFIG": path}).stdout)
            self.assertEqual(from_file["seed"], 5)
            flagged = json.loads(run("--seed", "6", *args, env={"NCRW_CONFIG": path}).stdout)
            self.assertEqual(flagged["seed"], 6)
            default = run("kernel", "--spec", "stationary:0.5", "--dt", "0", "--dx", "1").stdout
            self.assertEqual(default.strip(), "0.31830988618379069")
            as_json = run("kernel", "--spec", "stationary:0.5", "--dt", "0", "--dx", "1",
                          env={"NCRW_CONFIG": path}).stdout
            self.assertEqual(json.loads(as_json)["value"], 1 / math.pi)

    def test_deterministic_bytes(self):
        args = ["--threads", "1", "--seed", "3", "--output", "json", "simulate", "--config",
                "0,2", "--at", "0.5:0,2", "--samples", "5000", "--estimator", "h"]
        first = run(*args).stdout
        self.assertEqual(first, run(*args).stdout)
        threaded = ["--threads", "3"] + args[2:]
        self.assertEqual(first, run(*threaded).stdout)
        grid = ["kernel", "--spec", "finite:-1,0,3", "--grid", "--times", "0.3,1",
                "--window", "-2:2"]
        self.assertEqual(run(*grid).stdout, run(*grid).stdout)


class Schemas(unittest.TestCase):
    def check(self, name, *args):
        doc = json.loads(run("--output", "json", *args).stdout)
        jsonschema.validate(doc, schema(name))
        return doc

    def test_kernel(self):
        self.check("kernel", "kernel", "--spec", "finite:0,2", "--point", "0.5,0", "--point", "1,2")
        self.check("kernel", "kernel", "--spec", "stationary:1/3", "--dt", "0.4", "--dx", "2")
        self.check("kernel", "kernel", "--spec", "lattice:2", "--grid", "--times", "0.5",
                   "--window", "0:1")

    def test_density(self):
        self.check("density", "density", "--spec", "lattice:3", "--t", "1", "--window", "-2:2")

    def test_correlation(self):
        self.check("correlation", "correlation", "--spec", "finite:0,2", "--at", "0.5:0,2",
                   "--at", "1:1")

    def test_simulate(self):
        self.check("simulate", "simulate", "--config", "0,2", "--at", "0.5:0", "--samples", "2000")

    def test_relaxation(self):
        self.check("relaxation", "relaxation", "--tau", "1,2", "--dx-max", "1")

    def test_selftest(self):
        proc = run("--output", "json", "selftest", check=False)
        doc = json.loads(proc.stdout)
        jsonschema.validate(doc, schema("selftest"))
        self.assertEqual(proc.returncode == 0, doc["passed"])
        self.assertEqual(doc["passed"], all(r["passed"] for r in doc["results"]))
        self.assertEqual([r["id"] for r in doc["results"]], [1, 2, 3, 4, 5, 7, 8, 9])

    def test_selftest_text(self):
        proc = run("selftest", check=False)
        lines = proc.stdout.strip().splitlines()
        verdicts = [l.split()[0] for l in lines if l.startswith(("PASS", "FAIL"))]
        self.assertEqual(len(verdicts), 8)
        self.assertEqual(proc.returncode == 0, all(v == "PASS" for v in verdicts))

    def test_schemas_are_valid(self):
        for name in ("kernel", "density", "correlation", "simulate", "relaxation", "selftest"):
            jsonschema.Draft202012Validator.check_schema(schema(name))


if __name__ == "__main__":
    NCRW = sys.argv[1]
    SCHEMAS = sys.argv[2]
    unittest.main(argv=[sys.argv[0], *sys.argv[3:]], verbosity=2)
