# Copyright 2026 The radiogen Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the radiogen command line: exit codes and job specs."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

CLI = os.environ["RADIOGEN_CLI"]
FIXTURES = os.environ["RADIOGEN_FIXTURES"]
DATA = os.environ["RADIOGEN_DATA"]
SCHEMAS = os.environ["RADIOGEN_SCHEMAS"]


def run(*args, stdin=""):
    return subprocess.run([CLI, "-q", *args], input=stdin, capture_output=True,
                          text=True, timeout=120)


def fixture(*parts):
    return os.path.join(FIXTURES, *parts)


class ExitCodeTest(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_help_and_version(self):
        self.assertEqual(subprocess.run([CLI, "--help"], capture_output=True).returncode, 0)
        version = subprocess.run([CLI, "--version"], capture_output=True, text=True)
        self.assertEqual(version.returncode, 0)
        self.assertTrue(version.stdout.strip())

    def test_usage_errors(self):
        self.assertEqual(run().returncode, 1)
        self.assertEqual(run("bogus").returncode, 1)
        self.assertEqual(run("split", "--in", "x").returncode, 1)

    def test_missing_lexicon_is_validation_error(self):
        out = os.path.join(self.dir, "clean.jsonl")
        proc = run("clean", "--in", fixture("reports40.jsonl"), "--out", out)
        self.assertEqual(proc.returncode, 1)
        self.assertFalse(os.path.exists(out))

    def test_unreadable_input_is_io_error(self):
        proc = run("ingest", "--in", os.path.join(self.dir, "absent.jsonl"),
                   "--out", os.path.join(self.dir, "c.jsonl"))
        self.assertEqual(proc.returncode, 1)
        self.assertTrue(proc.stderr.strip())

    def test_missing_config_for_run(self):
        self.assertEqual(run("run", "--config", os.path.join(self.dir, "none.json")).returncode, 1)

    def test_unreachable_backend_still_exits_cleanly(self):
        prompts = os.path.join(self.dir, "p.jsonl")
        corpus = os.path.join(self.dir, "c.jsonl")
        self.assertEqual(run("ingest", "--in", fixture("selection_eval.jsonl"),
                             "--out", corpus).returncode, 0)
        self.assertEqual(run("prompts", "--templates", os.path.join(DATA, "templates.json"),
                             "--corpus", corpus, "--out", prompts,
                             "--template-id", "1").returncode, 0)
        config = os.path.join(self.dir, "backends.json")
        with open(config, "w", encoding="utf-8") as f:
            json.dump({"backends": [{"backend_id": "dead", "kind": "http",
                                     "base_url": "http://127.0.0.1:9/v1",
                                     "model_name": "m"}]}, f)
        out = os.path.join(self.dir, "o.jsonl")
        proc = run("infer", "--backend", "dead", "--config", config, "--prompts", prompts,
                   "--out", out, "--max-retries", "0", "--timeout-ms", "2000")
        self.assertEqual(proc.returncode, 0, proc.stderr)
        with open(out, encoding="utf-8") as f:
            rows = [json.loads(line) for line in f if line.strip()][1:]
        self.assertEqual(len(rows), 10)
        self.assertTrue(all(r["failure"] == "backend_error" for r in rows))

    def test_kernels_selftest(self):
        self.assertEqual(run("kernels", "selftest", "--seed", "5", "--cases", "25").returncode, 0)

    def test_stage_chain(self):
        corpus = os.path.join(self.dir, "c.jsonl")
        clean = os.path.join(self.dir, "clean.jsonl")
        self.assertEqual(run("ingest", "--in", fixture("reports40.jsonl"), "--out", corpus).returncode, 0)
        self.assertEqual(run("clean", "--in", corpus, "--lexicon", fixture("lexicon.txt"),
                             "--out", clean).returncode, 0)
        with open(clean, encoding="utf-8") as f:
            rows = [line for line in f if line.strip()]
        self.assertEqual(len(rows) - 1, 32)
        split = os.path.join(self.dir, "split")
        self.assertEqual(run("split", "--in", clean, "--out-dir", split, "--seed", "7").returncode, 0)
        self.assertTrue(os.path.exists(os.path.join(split, "train.jsonl")))


class JobSchemaTest(unittest.TestCase):

    def test_select_outputs_validate(self):
        with open(os.path.join(SCHEMAS, "training_job.schema.json"), encoding="utf-8") as f:
            schema = json.load(f)
        validator = jsonschema.Draft202012Validator(schema)
        with tempfile.TemporaryDirectory() as tmp:
            work = os.path.join(tmp, "work")
            plan = os.path.join(tmp, "plan.json")
            proc = run("select", "--templates", os.path.join(DATA, "templates.json"),
                       "--trainer", "stub:" + fixture("stub_trainer.json"),
                       "--eval", fixture("selection_eval.jsonl"),
                       "--out", os.path.join(tmp, "selection.json"),
                       "--work-dir", work, "--plan-out", plan)
            self.assertEqual(proc.returncode, 0, proc.stderr)
            specs = [os.path.join(work, n) for n in sorted(os.listdir(work))
                     if n.startswith("job.") and n.endswith(".json")]
            self.assertEqual(len(specs), 5)
            for path in specs + [plan]:
                with open(path, encoding="utf-8") as f:
                    doc = json.load(f)
                errors = sorted(validator.iter_errors(doc), key=str)
                self.assertEqual(errors, [], path)
            with open(plan, encoding="utf-8") as f:
                self.assertEqual(json.load(f)["stage"], "full")
            with open(os.path.join(tmp, "selection.json"), encoding="utf-8") as f:
                self.assertEqual(json.load(f)["best_index"], 3)

    def test_schema_rejects_unknown_keys(self):
        with open(os.path.join(SCHEMAS, "training_job.schema.json"), encoding="utf-8") as f:
            schema = json.load(f)
        with self.assertRaises(jsonschema.ValidationError):
            jsonschema.validate({"schema_version": 1, "extra": True}, schema)


if __name__ == "__main__":
    unittest.main(argv=sys.argv[:1], verbosity=2)
