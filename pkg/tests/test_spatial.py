import pytest

from geodoc.spatial import SpatialKind, annotate_spatial_text


def fr_annotate(text, fr_rules, gazetteer):
    return annotate_spatial_text(text, "fr", fr_rules, gazetteer)


def en_annotate(text, en_rules, gazetteer):
    return annotate_spatial_text(text, "en", en_rules, gazetteer)


def by_surface(entities, surface):
    hits = [e for e in entities if e.surface == surface]
    assert hits, f"no entity with surface {surface!r}; got {[e.surface for e in entities]}"
    return hits[0]


class TestFrenchPhrases:
    def test_golfe_de_guinee_absolute(self, fr_rules, gazetteer):
        ents, _ = fr_annotate("Les pluies arrivent du golfe de Guinée.", fr_rules, gazetteer)
        e = by_surface(ents, "golfe de Guinée")
        assert e.kind is SpatialKind.ABSOLUTE
        assert e.footprint and e.footprint.gazetteer_id == 1009

    def test_lac_eyre_absolute(self, fr_rules, gazetteer):
        ents, _ = fr_annotate("Le bassin du lac Eyre est endoréique.", fr_rules, gazetteer)
        e = by_surface(ents, "lac Eyre")
        assert e.kind is SpatialKind.ABSOLUTE
        assert e.footprint and e.footprint.gazetteer_id == 1011

    def test_sud_ouest_arabie_relative_orientation(self, fr_rules, gazetteer):
        ents, _ = fr_annotate(
            "Les reliefs du sud-ouest de l'Arabie Saoudite sont arides.", fr_rules, gazetteer
        )
        e = by_surface(ents, "sud-ouest de l'Arabie Saoudite")
        assert e.kind is SpatialKind.RELATIVE
        assert e.relation == "Orientation"
        anchor = by_surface(ents, "Arabie Saoudite")
        assert anchor.kind is SpatialKind.ABSOLUTE
        assert (anchor.start, anchor.end) in e.anchors
        assert e.footprint and e.footprint.gazetteer_id == 1012

    def test_region_mackenzie_relative_inclusion(self, fr_rules, gazetteer):
        ents, _ = fr_annotate(
            "Des feux brûlent dans la région du Mackenzie chaque été.", fr_rules, gazetteer
        )
        e = by_surface(ents, "dans la région du Mackenzie")
        assert e.kind is SpatialKind.RELATIVE
        assert e.relation == "Inclusion"
        assert e.footprint and e.footprint.gazetteer_id == 1013


class TestEnglishPhrases:
    def test_willamette_river_absolute(self, en_rules, gazetteer):
        ents, _ = en_annotate("Flooding along the Willamette River increased.", en_rules, gazetteer)
        e = by_surface(ents, "Willamette River")
        assert e.kind is SpatialKind.ABSOLUTE
        assert e.footprint and e.footprint.gazetteer_id == 1014

    def test_indian_ocean_absolute(self, en_rules, gazetteer):
        ents, _ = en_annotate("Cyclones form over the Indian Ocean.", en_rules, gazetteer)
        e = by_surface(ents, "Indian Ocean")
        assert e.footprint and e.footprint.gazetteer_id == 1015

    def test_wujiang_river_basin_longest_match(self, en_rules, gazetteer):
        ents, _ = en_annotate("Erosion in the Wujiang River Basin is severe.", en_rules, gazetteer)
        e = by_surface(ents, "Wujiang River Basin")
        assert e.footprint and e.footprint.gazetteer_id == 1017
        # longest match wins: no shorter competing entity inside its span
        inner = [x for x in ents if x is not e and x.start >= e.start and x.end <= e.end]
        assert inner == []

    def test_near_paris_relative_adjacency(self, en_rules, gazetteer):
        ents, _ = en_annotate("Samples were collected near Paris.", en_rules, gazetteer)
        e = by_surface(ents, "near Paris")
        assert e.kind is SpatialKind.RELATIVE
        assert e.relation == "Adjacency"
        assert e.footprint and e.footprint.gazetteer_id == 1004


class TestOrganizations:
    def test_capitalized_run_before_action_verb(self, en_rules, gazetteer):
        ents, orgs = en_annotate(
            "The World Food Programme coordinates relief in Madagascar.", en_rules, gazetteer
        )
        assert any(o.surface == "World Food Programme" for o in orgs)
        assert not any(e.surface == "World Food Programme" for e in ents)
        assert any(e.surface == "Madagascar" for e in ents)

    def test_place_ending_in_feature_word_is_not_org(self, en_rules, gazetteer):
        ents, orgs = en_annotate(
            "The Senegal River supports irrigation downstream.", en_rules, gazetteer
        )
        assert orgs == []
        e = by_surface(ents, "Senegal River")
        assert e.footprint and e.footprint.gazetteer_id == 1002


class TestDisambiguation:
    def test_feature_type_filters_class(self, en_rules, gazetteer):
        # "Senegal" alone is a country; "Senegal River" must pick the stream entry
        ents, _ = en_annotate("Rainfall feeds the Senegal River every autumn.", en_rules, gazetteer)
        e = by_surface(ents, "Senegal River")
        assert e.footprint.gazetteer_id == 1002

    def test_bare_name_prefers_importance(self, en_rules, gazetteer):
        ents, _ = en_annotate("Droughts struck Senegal in the 1970s.", en_rules, gazetteer)
        e = by_surface(ents, "Senegal")
        assert e.footprint.gazetteer_id == 1001

    def test_country_context_beats_importance(self, fr_rules, gazetteer):
        text = "Une station de mesure est installée à Bayonne. Le projet est conduit en France."
        ents, _ = fr_annotate(text, fr_rules, gazetteer)
        e = by_surface(ents, "Bayonne")
        assert e.footprint.gazetteer_id == 1005  # FR entry beats higher-importance US one

    def test_without_context_importance_decides(self, fr_rules, gazetteer):
        ents, _ = fr_annotate("Une station est installée à Bayonne.", fr_rules, gazetteer)
        e = by_surface(ents, "Bayonne")
        assert e.footprint.gazetteer_id == 1006  # US entry has the larger importance prior

    def test_confidence_normalized(self, fr_rules, gazetteer):
        ents, _ = fr_annotate("Une station est installée à Bayonne.", fr_rules, gazetteer)
        e = by_surface(ents, "Bayonne")
        assert e.confidence is not None and 0.0 < e.confidence <= 1.0
        assert len(e.candidates) == 2

    def test_unresolved_name_has_no_footprint(self, en_rules, gazetteer):
        ents, _ = en_annotate("Fieldwork took place in Atlantisburg.", en_rules, gazetteer)
        e = by_surface(ents, "Atlantisburg")
        assert e.footprint is None
        assert e.candidates == ()


class TestInvariants:
    def test_offsets_slice_back_to_surface(self, fr_rules, gazetteer):
        text = "Les pluies du golfe de Guinée atteignent le sud-ouest de l'Arabie Saoudite."
        ents, orgs = fr_annotate(text, fr_rules, gazetteer)
        for e in ents:
            assert text[e.start : e.end] == e.surface
        for o in orgs:
            assert text[o.start : o.end] == o.surface

    def test_absolute_entities_never_overlap(self, fr_rules, gazetteer):
        text = "Le fleuve Sénégal traverse le Sénégal avant le golfe de Guinée."
        ents, _ = fr_annotate(text, fr_rules, gazetteer)
        abso = sorted(
            [e for e in ents if e.kind is SpatialKind.ABSOLUTE], key=lambda e: e.start
        )
        for a, b in zip(abso, abso[1:]):
            assert a.end <= b.start

    def test_relative_entity_wraps_anchor(self, en_rules, gazetteer):
        ents, _ = en_annotate("Stations operate near Paris.", en_rules, gazetteer)
        rel = by_surface(ents, "near Paris")
        for s, t in rel.anchors:
            assert rel.start <= s and t <= rel.end

    def test_deterministic(self, fr_rules, gazetteer):
        text = "Le delta du fleuve Sénégal, près de Bayonne, en France."
        a = fr_annotate(text, fr_rules, gazetteer)
        b = fr_annotate(text, fr_rules, gazetteer)
        assert a == b
