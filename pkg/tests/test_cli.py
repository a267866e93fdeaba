"""Manifest validation and command-line behavior: exit codes, payloads,
determinism, and failing-case round trips."""

import copy
import json

import pytest

from compatsplit.algebras import make_truncated_poly
from compatsplit.arrows import ArrowObject
from compatsplit.cli import EXIT_FALSIFIED, EXIT_INVALID, EXIT_OK, main
from compatsplit.contexts import (
    ArrowContext,
    FalsifiedTheorem,
    relative_ext,
    sha_n,
)
from compatsplit.homology import ext_group
from compatsplit.manifest import Manifest, ManifestError, diagram_manifest
from compatsplit.modules import hom_basis
from compatsplit.splitting import (
    SplittingCertificate,
    decide_compatible_split,
    duality_sequence,
    gen_split_diagrams,
)


def intro_raw() -> dict:
    zero_mat = {"rows": 0, "cols": 0, "entries": []}
    col_into = {"rows": 1, "cols": 0, "entries": []}
    col_onto = {"rows": 0, "cols": 1, "entries": []}
    return {
        "field": {"p": 2},
        "algebra": {"preset": "truncated_poly", "params": {"n": 1}},
        "context": {"kind": "arrow"},
        "modules": {"zero": {"actions": [zero_mat]}, "k": {"actions": [[[1]]]}},
        "morphisms": {
            "f": {"source": "zero", "target": "k", "matrix": col_into},
            "g": {"source": "k", "target": "k", "matrix": [[1]]},
            "h": {"source": "k", "target": "zero", "matrix": col_onto},
            "i_top": {"source": "zero", "target": "k", "matrix": col_into},
            "pi_top": {"source": "k", "target": "k", "matrix": [[1]]},
            "i_bottom": {"source": "k", "target": "k", "matrix": [[1]]},
            "pi_bottom": {"source": "k", "target": "zero", "matrix": col_onto},
        },
        "diagrams": {"intro_example": {
            "f": "f", "g": "g", "h": "h", "i_top": "i_top", "pi_top": "pi_top",
            "i_bottom": "i_bottom", "pi_bottom": "pi_bottom"}},
        "seed": 0,
    }


def write_manifest(tmp_path, raw, name="case.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


def run_json(args, capsys):
    code = main(list(args) + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


# -- manifest validation ---------------------------------------------------------


class TestManifestValidation:
    def test_shipped_fixture_matches_inline_copy(self):
        from importlib import resources
        ref = resources.files("compatsplit.fixtures").joinpath("intro_example.json")
        shipped = json.loads(ref.read_text())
        shipped.pop("comment")
        # same scene regardless of JSON formatting: compare parsed tables
        a, b = Manifest(shipped), Manifest(intro_raw())
        assert a.algebra.key() == b.algebra.key()
        assert sorted(a.modules) == sorted(b.modules)
        assert sorted(a.morphisms) == sorted(b.morphisms)

    def test_unknown_top_level_key(self):
        raw = intro_raw()
        raw["extra_table"] = {}
        with pytest.raises(ManifestError, match="unknown keys.*extra_table"):
            Manifest(raw)

    def test_dangling_module_name(self):
        raw = intro_raw()
        raw["morphisms"]["g"]["source"] = "ghost"
        with pytest.raises(ManifestError, match="morphism 'g'.*unknown module 'ghost'"):
            Manifest(raw)

    def test_dangling_morphism_name(self):
        raw = intro_raw()
        raw["diagrams"]["intro_example"]["f"] = "ghost"
        with pytest.raises(ManifestError,
                           match="diagram 'intro_example'.*unknown morphism"):
            Manifest(raw)

    def test_wrong_matrix_shape(self):
        raw = intro_raw()
        raw["morphisms"]["g"]["matrix"] = [[1, 0]]
        with pytest.raises(ManifestError, match="expected 1 columns, got 2"):
            Manifest(raw)

    def test_ragged_matrix(self):
        raw = intro_raw()
        raw["modules"]["m"] = {"actions": [[[1, 0], [0]]]}
        with pytest.raises(ManifestError, match="ragged"):
            Manifest(raw)

    def test_entry_count_mismatch_in_object_form(self):
        raw = intro_raw()
        raw["morphisms"]["f"]["matrix"] = {"rows": 1, "cols": 0, "entries": [1]}
        with pytest.raises(ManifestError, match="expected 0 entries"):
            Manifest(raw)

    def test_nonprime_modulus(self):
        raw = intro_raw()
        raw["field"]["p"] = 6
        with pytest.raises(ManifestError, match="prime"):
            Manifest(raw)

    def test_negative_entries_reduce_mod_p(self):
        raw = intro_raw()
        raw["field"]["p"] = 3
        raw["morphisms"]["g"]["matrix"] = [[-2]]
        raw["morphisms"]["pi_top"]["matrix"] = [[-2]]
        raw["morphisms"]["i_bottom"]["matrix"] = [[4]]
        man = Manifest(raw)
        assert man.morphisms["g"].mat[0, 0] == 1

    def test_not_a_representation(self):
        raw = intro_raw()
        raw["modules"]["k"]["actions"] = [[[0]]]
        with pytest.raises(ManifestError, match="module 'k'.*not a representation"):
            Manifest(raw)

    def test_corrupted_structure_constants(self):
        c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
        for i in range(3):
            for j in range(3):
                if i + j < 3:
                    c[i][j][i + j] = 1
        c[1][2][0] = 1  # x * x^2 = 1 while x^2 * x = 0: not associative
        raw = {"field": {"p": 2}, "algebra": {"structure": c, "unit": [1, 0, 0]}}
        with pytest.raises(ManifestError, match="algebra axioms.*assoc"):
            Manifest(raw)

    def test_non_intertwiner(self):
        raw = {
            "field": {"p": 2},
            "algebra": {"preset": "truncated_poly", "params": {"n": 2}},
            "modules": {
                "k": {"actions": [[[1]], [[0]]]},
                "reg": {"actions": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]]},
            },
            "morphisms": {"u": {"source": "k", "target": "reg",
                                "matrix": [[1], [0]]}},
        }
        with pytest.raises(ManifestError, match="morphism 'u'.*intertwine"):
            Manifest(raw)

    def test_broken_row_is_rejected(self):
        raw = intro_raw()
        raw["morphisms"]["pi_top"]["matrix"] = {"rows": 1, "cols": 1, "entries": [0]}
        with pytest.raises(ManifestError, match="diagram 'intro_example'.*not exact"):
            Manifest(raw)

    def test_bad_witness_is_rejected(self):
        raw = intro_raw()
        raw["diagrams"]["intro_example"]["witnesses"] = {
            "r_bottom": {"rows": 1, "cols": 1, "entries": [0]}}
        with pytest.raises(ManifestError, match="retraction fails"):
            Manifest(raw)

    def test_unknown_witness_key(self):
        raw = intro_raw()
        raw["diagrams"]["intro_example"]["witnesses"] = {"bogus": [[1]]}
        with pytest.raises(ManifestError, match="witnesses.*unknown keys"):
            Manifest(raw)

    def test_bounds_validation(self):
        raw = intro_raw()
        raw["bounds"] = {"ss": [1, 2]}
        with pytest.raises(ManifestError, match="at least 2"):
            Manifest(raw)
        raw["bounds"] = {"oracle_budget": 0}
        with pytest.raises(ManifestError, match="positive"):
            Manifest(raw)
        raw["bounds"] = {"resolution_length": 4, "ss": [4, 3]}
        assert Manifest(raw).bounds["ss"] == (4, 3)

    def test_restriction_embedding_must_match_algebra(self):
        raw = {
            "field": {"p": 2},
            "algebra": {"preset": "cyclic_group", "params": {"n": 8}},
            "context": {"kind": "restriction",
                        "embeddings": [{"preset": "cyclic_subgroup",
                                        "n": 4, "m": 2}]},
        }
        with pytest.raises(ManifestError, match="does not match the manifest algebra"):
            Manifest(raw)

    def test_digest_content_sensitive_and_stable(self):
        raw = intro_raw()
        d1 = Manifest(raw).digest()
        assert Manifest(copy.deepcopy(raw)).digest() == d1
        raw["seed"] = 1
        assert Manifest(raw).digest() != d1


# -- command payloads vs direct library calls -------------------------------------


class TestCommands:
    def test_split_intro_fixture_default_manifest(self, capsys):
        code, rep = run_json(["split", "intro_example"], capsys)
        assert code == EXIT_OK
        assert rep["status"] == "ok"
        assert rep["payload"]["verdict"] == "no compatible splitting"
        assert rep["payload"]["obstruction"]["group_dim"] == 1

    def test_split_default_diagram_name(self, capsys):
        code, rep = run_json(["split"], capsys)
        assert code == EXIT_OK
        assert rep["payload"]["diagram"] == "intro_example"

    def test_split_verdicts_and_certificates_match_library(self, tmp_path, capsys):
        a = make_truncated_poly(2, 2)
        gen = gen_split_diagrams(a, 6, seed=11)
        seen = {True: 0, False: 0}
        for idx in range(12):
            d = next(gen)
            path = write_manifest(tmp_path, diagram_manifest(d), f"d{idx}.json")
            code, rep = run_json(["split", "-m", path], capsys)
            assert code == EXIT_OK
            lib = decide_compatible_split(d)
            is_split = isinstance(lib, SplittingCertificate)
            seen[is_split] += 1
            if is_split:
                assert rep["payload"]["verdict"] == "split"
                assert rep["payload"]["reverified"] is True
            else:
                assert rep["payload"]["verdict"] == "no compatible splitting"
                assert (rep["payload"]["obstruction"]["group_dim"]
                        == lib.space.dim)
        assert seen[True] and seen[False], "corpus slice missed a verdict kind"

    def test_sha_matches_library(self, capsys):
        code, rep = run_json(["sha", "h", "f", "1"], capsys)
        assert code == EXIT_OK
        man = Manifest(intro_raw())
        y = ArrowObject(man.morphisms["h"]).t_module()
        x = ArrowObject(man.morphisms["f"]).t_module()
        lib = sha_n(man.context, y, x, 1)
        assert rep["payload"]["dim"] == lib.dim == 1
        assert rep["payload"]["ambient_dim"] == lib.ambient.dim

    def test_relext_matches_library(self, capsys):
        man = Manifest(intro_raw())
        y = ArrowObject(man.morphisms["h"]).t_module()
        x = ArrowObject(man.morphisms["f"]).t_module()
        for deg in (0, 1, 2):
            code, rep = run_json(["relext", "h", "f", str(deg)], capsys)
            assert code == EXIT_OK
            assert rep["payload"]["dim"] == relative_ext(man.context, y, x, deg).dim

    def test_ext_matches_library(self, capsys):
        man = Manifest(intro_raw())
        code, rep = run_json(["ext", "k", "k", "2"], capsys)
        assert code == EXIT_OK
        assert rep["payload"]["dim"] == ext_group(man.modules["k"],
                                                  man.modules["k"], 2).dim

    def test_duality_matches_library(self, capsys):
        code, rep = run_json(["duality", "h", "f", "1"], capsys)
        assert code == EXIT_OK
        man = Manifest(intro_raw())
        lib = duality_sequence(ArrowObject(man.morphisms["h"]),
                               ArrowObject(man.morphisms["f"]), 1)
        d = rep["payload"]["dims"]
        assert (d["sha_t"], d["ext_arrow"], d["ext_dom"], d["ext_cod"],
                d["ext_mixed"], d["sha_next"]) == lib.dims
        assert rep["payload"]["alternating_sum"] == 0
        assert rep["payload"]["verdict"] == "exact"

    def test_ss_payload_shape_and_values(self, capsys):
        code, rep = run_json(["ss", "h", "f"], capsys)
        assert code == EXIT_OK
        pl = rep["payload"]
        assert pl["window"] == [3, 2]
        assert pl["e2_dims"]["0,1"] == 1
        assert pl["d2_ranks"]["0,1"] == 1
        assert pl["interior_verified"] is True
        assert pl["verdicts"]["3,0"] == "boundary"

    def test_oracle_matches_decider_on_fixture(self, capsys):
        code, rep = run_json(["oracle"], capsys)
        assert code == EXIT_OK
        assert rep["payload"]["exists"] is False
        assert rep["payload"]["witness"] is None

    def test_restriction_sha_through_cli(self, tmp_path, capsys):
        raw = {
            "field": {"p": 2},
            "algebra": {"preset": "cyclic_group", "params": {"n": 4}},
            "context": {"kind": "restriction",
                        "embeddings": [{"preset": "cyclic_subgroup",
                                        "n": 4, "m": 2}]},
            "modules": {"k": {"actions": [[[1]], [[1]], [[1]], [[1]]]}},
        }
        path = write_manifest(tmp_path, raw)
        code, rep = run_json(["sha", "k", "k", "1", "-m", path], capsys)
        assert code == EXIT_OK
        assert rep["payload"]["dim"] == 1

    def test_overrides_are_echoed_and_applied(self, capsys):
        code, rep = run_json(["ss", "h", "f", "--seed", "9",
                              "--ss-bounds", "4,2"], capsys)
        assert code == EXIT_OK
        assert rep["seed"] == 9
        assert rep["bounds"]["ss"] == [4, 2]
        assert rep["payload"]["window"] == [4, 2]
        assert "3,1" in rep["payload"]["e2_dims"]


# -- exit codes -------------------------------------------------------------------


class TestExitCodes:
    def test_unknown_object_name(self, capsys):
        assert main(["sha", "ghost", "f", "1"]) == EXIT_INVALID
        assert "unknown morphism 'ghost'" in capsys.readouterr().err

    def test_degree_out_of_bounds(self, capsys):
        assert main(["sha", "h", "f", "99"]) == EXIT_INVALID
        assert "resolution-length bound" in capsys.readouterr().err

    def test_sha_degree_zero_rejected(self, capsys):
        assert main(["sha", "h", "f", "0"]) == EXIT_INVALID
        capsys.readouterr()

    def test_duality_needs_arrow_context(self, tmp_path, capsys):
        raw = {
            "field": {"p": 2},
            "algebra": {"preset": "cyclic_group", "params": {"n": 2}},
            "context": {"kind": "restriction",
                        "embeddings": [{"preset": "prime_field"}]},
        }
        path = write_manifest(tmp_path, raw)
        assert main(["duality", "a", "b", "1", "-m", path]) == EXIT_INVALID
        assert "arrow-context" in capsys.readouterr().err

    def test_invalid_manifest_file(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["split", "-m", str(path)]) == EXIT_INVALID
        assert "not valid JSON" in capsys.readouterr().err

    def test_oracle_refusal_is_input_error(self, tmp_path, capsys):
        a = make_truncated_poly(2, 2)
        for d in gen_split_diagrams(a, 6, seed=3):
            space = (len(hom_basis(d.h.source, d.f.source))
                     + len(hom_basis(d.h.target, d.f.target)))
            if space > 1:
                break
        path = write_manifest(tmp_path, diagram_manifest(d))
        assert main(["oracle", "-m", path, "--oracle-budget", "1"]) == EXIT_INVALID
        assert "budget" in capsys.readouterr().err

    def test_falsified_theorem_exits_3_with_reproduction(self, monkeypatch, capsys):
        import compatsplit.cli as cli_mod

        def explode(*a, **k):
            raise FalsifiedTheorem("injected failure for exit-code test")

        monkeypatch.setattr(cli_mod, "sha_n", explode)
        code, rep = run_json(["sha", "h", "f", "1"], capsys)
        assert code == EXIT_FALSIFIED
        assert rep["status"] == "falsified"
        assert "injected failure" in rep["payload"]["error"]
        repro = rep["payload"]["reproduce"]
        assert repro["command"] == "sha"
        assert repro["digest"] == rep["digest"]
        assert repro["seed"] == rep["seed"]


# -- corpus sweep ------------------------------------------------------------------


class TestCorpus:
    def test_corpus_passes_and_is_byte_deterministic(self, tmp_path, capsys):
        args = ["corpus", "--seed", "42", "--dump-dir", str(tmp_path),
                "--format", "json"]
        code1 = main(args)
        out1 = capsys.readouterr().out
        code2 = main(args)
        out2 = capsys.readouterr().out
        assert code1 == code2 == EXIT_OK
        assert out1 == out2
        rep = json.loads(out1)
        assert rep["payload"]["totals"]["fail"] == 0
        assert rep["payload"]["totals"]["pass"] > 0
        names = [s["name"] for s in rep["payload"]["suites"]]
        assert names == ["split_vs_oracle", "sha_three_ways", "duality",
                         "ss_collapse"]

    def test_corpus_case_ids_sorted(self, tmp_path, capsys):
        code, rep = run_json(["corpus", "--dump-dir", str(tmp_path)], capsys)
        assert code == EXIT_OK
        for suite in rep["payload"]["suites"]:
            ids = [c["id"] for c in suite["cases"]]
            assert ids == sorted(ids)

    def test_corpus_failure_dumps_reproducible_manifest(self, tmp_path,
                                                        monkeypatch, capsys):
        import compatsplit.cli as cli_mod

        class Lie:
            dim = 99

        monkeypatch.setattr(cli_mod, "sha1_cokernel", lambda h, f: Lie())
        code, rep = run_json(["corpus", "--dump-dir", str(tmp_path)], capsys)
        assert code == EXIT_FALSIFIED
        suite = next(s for s in rep["payload"]["suites"]
                     if s["name"] == "sha_three_ways")
        failing = [c for c in suite["cases"] if c["status"] == "fail"]
        assert failing and all(c["dump"] for c in failing)
        monkeypatch.undo()
        for case in failing[:3]:
            dump_path = tmp_path / case["dump"]
            assert dump_path.exists()
            man = Manifest.load(dump_path)  # the dump must validate as-is
            assert "reproduce" in man.raw["comment"]
            # the command named in the comment runs against the dump
            code2, rep2 = run_json(["sha", "Y", "X", "1", "-m",
                                    str(dump_path)], capsys)
            assert code2 == EXIT_OK
            assert rep2["payload"]["dim"] != 99

    def test_diagram_manifest_round_trip_verdicts(self, capsys):
        a = make_truncated_poly(2, 2)
        gen = gen_split_diagrams(a, 6, seed=23)
        for _ in range(8):
            d = next(gen)
            man = Manifest(diagram_manifest(d))
            lib1 = decide_compatible_split(d)
            lib2 = decide_compatible_split(man.diagrams["case"])
            assert (isinstance(lib1, SplittingCertificate)
                    == isinstance(lib2, SplittingCertificate))
