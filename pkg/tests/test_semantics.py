import pytest

from semviz.indexing import Index
from semviz.semantics import (
    functional_type_name,
    ground_functional_types,
    join_triplets,
    opposite_upstream_regulators,
    upstream_regulators,
)
from semviz.taxonomy import Metatype, Polarity

import oracles
from conftest import build_corpus, ca_line, kg_line, synth_corpus


def ft_by_name(index, name):
    return index.functional_type_by_name(name)


class TestGrounding:
    def test_covid19_activator(self, paper_corpus):
        ft = ft_by_name(paper_corpus.index, "COVID-19 Activator")
        assert [m.display for m in ft.members] == ["ocrelizumab"]
        assert ft.polarity is Polarity.INCREASE
        assert ft.metatype is Metatype.REGULATE_ACTIVITY

    def test_sh2d3a_activator(self, paper_corpus):
        ft = ft_by_name(paper_corpus.index, "SH2D3A Activator")
        assert [m.display for m in ft.members] == ["Interferon"]

    def test_minus_casp3_regulator(self, paper_corpus):
        ft = ft_by_name(paper_corpus.index, "--CASP3 Regulator")
        assert [m.display for m in ft.members] == ["D014013"]
        assert ft.display_name == "--CASP3 Regulator"

    def test_empty_index_grounds_nothing(self):
        index = Index.build([], [], [])
        assert index.functional_types == []

    def test_grounding_registers_filterable_field(self, paper_corpus):
        index = paper_corpus.index
        posting = index.posting("functional_type", "COVID-19 Activator")
        ft = ft_by_name(index, "COVID-19 Activator")
        assert posting == ft.doc_ids and posting

    def test_one_type_per_distinct_key(self):
        corpus = build_corpus("\n".join([
            ca_line("A", "T", "Activation", [{"sentence": "a."}]),
            ca_line("B", "T", "Activation", [{"sentence": "b."}]),
            ca_line("C", "T", "Inhibition", [{"sentence": "c."}]),
        ]))
        names = [ft.display_name for ft in corpus.index.functional_types]
        assert names.count("T Activator") == 1
        assert "T Inhibitor" in names
        activator = ft_by_name(corpus.index, "T Activator")
        assert activator.member_entities() == ("a", "b")

    @pytest.mark.parametrize("seed", range(5))
    def test_membership_matches_brute_force(self, seed):
        corpus = synth_corpus(seed + 30, n_ca=50, n_kg=30)
        groups, _ = oracles.ground_brute(corpus.records, corpus.taxonomy)
        names = oracles.ft_display_names(corpus.records, corpus.taxonomy)
        engine = {ft.key: ft for ft in corpus.index.functional_types}
        assert set(engine) == {
            (obj, pol.value, mt.value) for obj, pol, mt in groups}
        for (obj, pol, mt), members in groups.items():
            ft = engine[(obj, pol.value, mt.value)]
            assert ft.display_name == names[(obj, pol, mt)]
            assert {m.entity: set(m.record_ids) for m in ft.members} == {
                e: set(rids) for e, rids in members.items()}

    def test_order_independence(self):
        corpus = synth_corpus(42, n_ca=30, n_kg=20)
        backwards = Index.build(list(reversed(corpus.records)),
                                list(reversed(corpus.docs)),
                                corpus.articles, corpus.taxonomy)
        assert [ft.key for ft in backwards.functional_types] == [
            ft.key for ft in corpus.index.functional_types]


class TestNaming:
    def test_paper_names(self):
        assert functional_type_name(
            "COVID-19", Polarity.INCREASE, Metatype.REGULATE_ACTIVITY, "Activation"
        ) == "COVID-19 Activator"
        assert functional_type_name(
            "CASP3", Polarity.DECREASE, Metatype.OTHER, "Decrease Reaction"
        ) == "--CASP3 Regulator"

    def test_affect_symbolic_form(self):
        assert functional_type_name(
            "TNF", Polarity.AFFECT, Metatype.OTHER) == "→TNF Regulator"

    def test_inhibitor(self):
        assert functional_type_name(
            "MAVS", Polarity.DECREASE, Metatype.REGULATE_ACTIVITY, "Inhibition"
        ) == "MAVS Inhibitor"

    def test_regulate_activity_without_unique_specific_uses_symbol(self):
        assert functional_type_name(
            "MAVS", Polarity.INCREASE, Metatype.REGULATE_ACTIVITY, None
        ) == "++MAVS Regulator"

    def test_modification_target_and_fallback(self):
        assert functional_type_name(
            "EIF2S1", Polarity.AFFECT, Metatype.MODIFICATION, "Phosphorylation"
        ) == "EIF2S1 Phosphorylation target"
        assert functional_type_name(
            "EIF2S1", Polarity.AFFECT, Metatype.MODIFICATION
        ) == "EIF2S1 Modifier"

    def test_referentially_transparent(self):
        args = ("X", Polarity.DECREASE, Metatype.OTHER, "Decrease Expression")
        assert functional_type_name(*args) == functional_type_name(*args)


class TestUpstream:
    def _chain_corpus(self):
        return build_corpus("\n".join([
            ca_line("B", "C", "Activation", [{"sentence": "B activates C."}]),
            ca_line("A", "B", "Activation", [{"sentence": "A activates B."}]),
            ca_line("X", "B", "Inhibition", [{"sentence": "X inhibits B."}]),
        ]))

    def test_same_polarity_upstream(self):
        corpus = self._chain_corpus()
        ft = ft_by_name(corpus.index, "C Activator")
        regs = upstream_regulators(corpus.index, ft)
        assert [(h.entity, h.via_member) for h in regs.hits] == [("a", "b")]
        assert regs.note is None

    def test_opposite_polarity_upstream(self):
        corpus = self._chain_corpus()
        ft = ft_by_name(corpus.index, "C Activator")
        regs = opposite_upstream_regulators(corpus.index, ft)
        assert [(h.entity, h.via_member) for h in regs.hits] == [("x", "b")]

    def test_member_is_not_automatically_upstream(self):
        corpus = self._chain_corpus()
        ft = ft_by_name(corpus.index, "C Activator")
        regs = upstream_regulators(corpus.index, ft)
        assert all(h.entity != "a" or h.via_member == "b" for h in regs.hits)
        assert ft.member_entities() == ("b",)

    def test_no_incoming_edges(self):
        corpus = build_corpus(
            ca_line("B", "C", "Activation", [{"sentence": "s."}]))
        ft = ft_by_name(corpus.index, "C Activator")
        assert upstream_regulators(corpus.index, ft).hits == ()

    def test_only_activation_corpus_has_empty_opposite(self):
        corpus = build_corpus("\n".join([
            ca_line("B", "C", "Activation", [{"sentence": "s."}]),
            ca_line("A", "B", "Activation", [{"sentence": "t."}]),
        ]))
        ft = ft_by_name(corpus.index, "C Activator")
        assert opposite_upstream_regulators(corpus.index, ft).hits == ()

    def test_affect_type_comes_back_flagged(self):
        corpus = build_corpus(
            ca_line("A", "B", "Complex", [{"sentence": "s."}]))
        ft = ft_by_name(corpus.index, "→B Regulator")
        regs = upstream_regulators(corpus.index, ft)
        assert regs.hits == () and regs.note

    def test_non_regulate_activity_edges_do_not_count(self):
        corpus = build_corpus("\n".join([
            ca_line("B", "C", "Activation", [{"sentence": "s."}]),
            ca_line("A", "B", "Increase Expression", [{"sentence": "t."}]),
        ]))
        ft = ft_by_name(corpus.index, "C Activator")
        assert upstream_regulators(corpus.index, ft).hits == ()

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force_double_loop(self, seed):
        corpus = synth_corpus(seed + 40, n_ca=60, n_kg=20)
        for ft in corpus.index.functional_types:
            if ft.polarity is Polarity.AFFECT:
                continue
            for flip, fn in ((False, upstream_regulators),
                             (True, opposite_upstream_regulators)):
                want = oracles.brute_upstream(
                    corpus.records, corpus.taxonomy,
                    ft.object, ft.polarity, ft.metatype, flip=flip)
                got = {(h.entity, h.via_member): frozenset(h.record_ids)
                       for h in fn(corpus.index, ft).hits}
                assert got == want, (ft.display_name, flip)

    @pytest.mark.parametrize("seed", range(3))
    def test_signs_partition_the_second_order_edges(self, seed):
        # the supporting record sets are disjoint; an entity may still sit in
        # both clouds when parallel contradictory assertions exist
        corpus = synth_corpus(seed + 50, n_ca=60, n_kg=0)
        for ft in corpus.index.functional_types:
            if ft.polarity is Polarity.AFFECT:
                continue
            same = {rid for h in upstream_regulators(corpus.index, ft).hits
                    for rid in h.record_ids}
            opp = {rid for h in opposite_upstream_regulators(corpus.index, ft).hits
                   for rid in h.record_ids}
            assert same.isdisjoint(opp)


class TestTriplets:
    def test_simple_join(self):
        corpus = build_corpus(kg_text="\n".join([
            kg_line("c1", "g1", "Decrease Expression", "chemical_gene", "s1.", "p1"),
            kg_line("g1", "d1", "Increase Reaction", "gene_disease", "s2.", "p2"),
        ]))
        triplets = join_triplets(corpus.index)
        assert len(triplets) == 1
        t = triplets[0]
        assert (t.chemical, t.gene, t.disease) == ("c1", "g1", "d1")
        assert set(t.evidence) == {"kg0:1", "kg0:2"}

    def test_no_shared_gene(self):
        corpus = build_corpus(kg_text="\n".join([
            kg_line("c1", "g1", "Decrease Expression", "chemical_gene", "s1."),
            kg_line("g2", "d1", "Increase Reaction", "gene_disease", "s2."),
        ]))
        assert join_triplets(corpus.index) == []

    def test_deterministic_lexicographic_order(self):
        corpus = build_corpus(kg_text="\n".join([
            kg_line("z", "g", "Decrease Expression", "chemical_gene", "s."),
            kg_line("a", "g", "Decrease Expression", "chemical_gene", "s."),
            kg_line("g", "d2", "Increase Reaction", "gene_disease", "s."),
            kg_line("g", "d1", "Increase Reaction", "gene_disease", "s."),
        ]))
        triplets = join_triplets(corpus.index)
        assert [(t.chemical, t.disease) for t in triplets] == [
            ("a", "d1"), ("a", "d2"), ("z", "d1"), ("z", "d2")]

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force_nested_loop(self, seed):
        corpus = synth_corpus(seed + 60, n_ca=10, n_kg=50)
        want = oracles.brute_triplets(corpus.records)
        got = {
            (t.chemical, t.gene, t.disease,
             t.cg_relation.casefold(), t.gd_relation.casefold()): frozenset(t.evidence)
            for t in join_triplets(corpus.index)
        }
        assert got == want

    def test_size_bound(self):
        corpus = synth_corpus(99, n_ca=0, n_kg=60)
        cg = sum(1 for r in corpus.records if r.pair_kind.value == "chemical_gene")
        gd = sum(1 for r in corpus.records if r.pair_kind.value == "gene_disease")
        assert len(join_triplets(corpus.index)) <= cg * gd
