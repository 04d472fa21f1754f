import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from semviz import queryops
from semviz.cli import main
from semviz.indexing import Index

from conftest import DEMO_CA_TEXT, DEMO_KG_TEXT, DEMO_META_TEXT

TAXONOMY_YAML = """
relation_types:
  - {name: Activation, metatype: regulate_activity, polarity: increase}
  - {name: Inhibition, metatype: regulate_activity, polarity: decrease}
  - {name: Phosphorylation, metatype: modification, polarity: affect}
  - {name: Decrease Reaction, metatype: other, polarity: decrease}
  - {name: Increase Expression, metatype: other, polarity: increase}
  - {name: Increase Reaction, metatype: other, polarity: increase}
"""


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def inputs(tmp_path: Path) -> dict:
    ca = tmp_path / "ca.jsonl"
    kg = tmp_path / "kg.jsonl"
    meta = tmp_path / "meta.csv"
    tax = tmp_path / "tax.yaml"
    ca.write_text(DEMO_CA_TEXT + "\n", encoding="utf-8")
    kg.write_text(DEMO_KG_TEXT + "\n", encoding="utf-8")
    meta.write_text(DEMO_META_TEXT, encoding="utf-8")
    tax.write_text(TAXONOMY_YAML, encoding="utf-8")
    return {"ca": ca, "kg": kg, "meta": meta, "tax": tax, "out": tmp_path / "idx"}


def build_args(inputs, with_taxonomy=True):
    args = ["build", "--ca", str(inputs["ca"]), "--kg", str(inputs["kg"]),
            "--meta", str(inputs["meta"]), "--out", str(inputs["out"])]
    if with_taxonomy:
        args += ["--taxonomy", str(inputs["tax"])]
    return args


class TestBuild:
    def test_happy_path_writes_artifact_and_rejects_report(self, runner, inputs):
        result = runner.invoke(main, build_args(inputs))
        assert result.exit_code == 0, result.output
        assert (inputs["out"] / "index.json").exists()
        rejects = json.loads((inputs["out"] / "rejects.json").read_text())
        assert rejects["counts"]["records"] == 11
        assert Index.load(inputs["out"]).record_count() == 11

    def test_missing_taxonomy_uses_default_with_warning(self, runner, inputs):
        result = runner.invoke(main, build_args(inputs, with_taxonomy=False))
        assert result.exit_code == 0
        assert "built-in default" in result.stderr

    def test_malformed_meta_header_exits_2_naming_column(self, runner, inputs):
        inputs["meta"].write_text("pmid,title,abstract,authors,journal\n", encoding="utf-8")
        result = runner.invoke(main, build_args(inputs))
        assert result.exit_code == 2
        assert "publish_time" in result.stderr

    def test_missing_input_file_exits_nonzero_naming_path(self, runner, inputs):
        args = build_args(inputs)
        args[args.index("--ca") + 1] = str(inputs["ca"].parent / "absent.jsonl")
        result = runner.invoke(main, args)
        assert result.exit_code != 0
        assert "absent.jsonl" in result.stderr

    def test_rejected_lines_reported_not_fatal(self, runner, inputs):
        inputs["ca"].write_text(DEMO_CA_TEXT + "\nnot json at all\n", encoding="utf-8")
        result = runner.invoke(main, build_args(inputs))
        assert result.exit_code == 0
        rejects = json.loads((inputs["out"] / "rejects.json").read_text())
        assert rejects["counts"]["rejected_lines"] == 1
        assert rejects["causal_assertions"][0]["reason"].startswith("bad JSON")


class TestQuery:
    @pytest.fixture()
    def built(self, runner, inputs):
        assert runner.invoke(main, build_args(inputs)).exit_code == 0
        return inputs["out"]

    def test_tagcloud_matches_endpoint_content(self, runner, built):
        result = runner.invoke(main, ["query", "tagcloud", "--index", str(built),
                                      "--field", "subject", "-k", "5"])
        assert result.exit_code == 0, result.output
        direct = queryops.op_tagcloud(Index.load(built),
                                      {"filters": [], "field": "subject", "k": 5})
        assert json.loads(result.output) == direct

    def test_filters_and_text(self, runner, built):
        result = runner.invoke(main, [
            "query", "metrics", "--index", str(built),
            "--filter", "relation_type=Activation", "--text", "MAVS"])
        assert result.exit_code == 0
        assert json.loads(result.output)["evidence_count"] > 0

    def test_bad_filter_syntax(self, runner, built):
        result = runner.invoke(main, ["query", "metrics", "--index", str(built),
                                      "--filter", "notapair"])
        assert result.exit_code == 2
        assert "field=term" in result.stderr

    def test_heatmap(self, runner, built):
        result = runner.invoke(main, ["query", "heatmap", "--index", str(built),
                                      "--x", "chemical", "--y", "disease"])
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["x"] == "chemical" and body["cells"]

    def test_pathways(self, runner, built):
        result = runner.invoke(main, ["query", "pathways", "--index", str(built),
                                      "--target", "mavs"])
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["effective_depth"] <= 5 and body["regulators"]

    def test_functional_types_and_upstream(self, runner, built):
        listing = runner.invoke(main, ["query", "functional-types",
                                       "--index", str(built), "--q", "activator"])
        assert listing.exit_code == 0
        ups = runner.invoke(main, ["query", "upstream", "--index", str(built),
                                   "--name", "MAVS Activator"])
        assert ups.exit_code == 0
        assert {h["display"] for h in json.loads(ups.output)["hits"]} == {"IFNA"}

    def test_doc(self, runner, built):
        doc_id = Index.load(built).all_doc_ids[0]
        result = runner.invoke(main, ["query", "doc", "--index", str(built),
                                      "--id", doc_id])
        assert result.exit_code == 0
        assert json.loads(result.output)["id"] == doc_id

    def test_semviz_index_env_var(self, runner, built):
        result = runner.invoke(main, ["query", "metrics"],
                               env={"SEMVIZ_INDEX": str(built)})
        assert result.exit_code == 0, result.output

    def test_unknown_subcommand_prints_usage(self, runner, built):
        result = runner.invoke(main, ["query", "wordsalad", "--index", str(built)])
        assert result.exit_code == 2
        assert "Usage" in result.stderr or "Usage" in result.output

    def test_query_error_surfaces_as_exit_2(self, runner, built):
        result = runner.invoke(main, ["query", "tagcloud", "--index", str(built),
                                      "--field", "flavour"])
        assert result.exit_code == 2
        assert "flavour" in result.stderr


class TestReport:
    def test_writes_figures_and_csvs(self, runner, inputs, tmp_path):
        assert runner.invoke(main, build_args(inputs)).exit_code == 0
        out = tmp_path / "report"
        result = runner.invoke(main, ["report", "--index", str(inputs["out"]),
                                      "--out", str(out)])
        assert result.exit_code == 0, result.output
        names = {p.name for p in out.iterdir()}
        assert "tagcloud_subject.csv" in names and "tagcloud_subject.png" in names
        assert "heatmap_object_x_subject.csv" in names
        assert "heatmap_object_x_subject.png" in names
        assert "histogram.csv" in names and "histogram.png" in names
        assert "metrics.csv" in names
        header = (out / "tagcloud_subject.csv").read_text().splitlines()[0]
        assert header == "term,count"

    def test_report_respects_filters(self, runner, inputs, tmp_path):
        assert runner.invoke(main, build_args(inputs)).exit_code == 0
        out = tmp_path / "scoped"
        result = runner.invoke(main, [
            "report", "--index", str(inputs["out"]), "--out", str(out),
            "--filter", "subject=ifna", "--field", "object"])
        assert result.exit_code == 0, result.output
        rows = (out / "tagcloud_object.csv").read_text().splitlines()[1:]
        assert sorted(r.split(",")[0] for r in rows) == ["RIGI", "TBK1"]
