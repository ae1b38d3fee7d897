#!/usr/bin/env python3
"""Build the gold mini-corpus JSON files from inline-marked source texts.

Markup: [[surface|CATEGORY]] spans, nesting not supported; ESR spans that
contain an inner ESA are written as two marks over the same words:
[[...|ESR]] wraps text that may itself contain [[...|ESA]] marks.

Run from the repo root:  python3 tools/build_gold.py
"""

from __future__ import annotations

import json
import re
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "geodoc" / "resources" / "gold"

MARK = re.compile(r"\[\[")


def strip_marks(marked: str) -> tuple[str, list[dict]]:
    """Resolve nested [[...|CAT]] marks into plain text + span list."""
    text = []
    spans = []
    stack = []  # (category, start_offset)
    i = 0
    pos = 0  # output offset
    while i < len(marked):
        if marked.startswith("[[", i):
            i += 2
            stack.append(pos)
            continue
        if marked.startswith("|", i):
            # find matching ']]' and category
            m = re.match(r"\|([A-Za-z]+)\]\]", marked[i:])
            if m and stack:
                start = stack.pop()
                spans.append(
                    {
                        "start": start,
                        "end": pos,
                        "category": m.group(1),
                        "surface": "".join(text)[start:pos],
                    }
                )
                i += m.end()
                continue
        text.append(marked[i])
        pos += 1
        i += 1
    if stack:
        raise ValueError("unbalanced markup")
    return "".join(text), sorted(spans, key=lambda s: (s["start"], s["end"]))


DOCS: dict[str, str] = {}

DOCS["gold-01-fr"] = """\
Cette étude analyse les effets du changement climatique sur les systèmes de \
production agricole [[dans la vallée du [[fleuve Sénégal|ESA]]|ESR]]. Les \
observations conduites [[entre 1995 et 2005|Temporal]] montrent une baisse \
marquée des [[précipitations|Thematic]] et une progression de la \
[[sécheresse|Thematic]] [[au nord du [[Sénégal|ESA]]|ESR]], notamment autour \
de [[Saint-Louis|ESA]] et du [[delta du fleuve Sénégal|ESA]]. Les campagnes \
de mesure menées depuis [[Dakar|ESA]] par les équipes locales indiquent que \
la [[culture|Thematic]] du [[riz|Thematic]] et du [[mil|Thematic]] recule \
dans les zones les plus exposées. Le [[CIRAD|Organization]] coordonne un \
réseau d'observation réparti sur plusieurs stations, et \
l'[[IRD|Organization]] publie chaque année une synthèse des données \
recueillies. Les résultats suggèrent que l'[[irrigation|Thematic]] à partir \
du [[fleuve Sénégal|ESA]] constitue la principale stratégie \
d'[[adaptation|Thematic]] pour les exploitations familiales. Une comparaison \
avec la situation [[en [[Casamance|ESA]]|ESR]] souligne le rôle des \
politiques publiques dans la gestion des [[ressources en eau|Thematic]]. \
Les simulations réalisées pour la période allant de [[2030|Temporal]] à \
[[2050|Temporal]] prévoient une hausse des températures moyennes de deux \
degrés. Ces travaux, engagés depuis [[mars 2004|Temporal]], plaident pour un \
renforcement des réseaux de suivi hydrologique sur l'ensemble du bassin, \
depuis le [[Fouta Djallon|ESA]] jusqu'à l'embouchure, et pour une meilleure \
coordination régionale entre les États riverains du bassin versant.
Ces conclusions restent provisoires et devront être confirmées par des séries d'observation plus longues, couvrant la variabilité interannuelle des crues et la diversité des situations agraires locales rencontrées le long de la vallée alluviale.
"""

DOCS["gold-02-fr"] = """\
Le présent article examine la vulnérabilité des zones côtières \
[[à l'ouest de [[Madagascar|ESA]]|ESR]] face à l'érosion et à la montée des \
eaux. Les relevés effectués [[entre 1990 et 2010|Temporal]] autour de \
[[Morondava|ESA]] et de [[Toliara|ESA]] révèlent un recul du trait de côte \
atteignant trois mètres par an. Le [[changement climatique|Thematic]] \
accentue la fréquence des cyclones qui frappent le canal du \
[[Mozambique|ESA]]. Les mangroves, qui protègent naturellement le littoral, \
subissent une [[déforestation|Thematic]] rapide liée à la demande en bois de \
chauffe. L'[[Université d'Antananarivo|Organization]] conduit depuis \
[[les années 1990|Temporal]] un programme de cartographie des habitats \
côtiers, en partenariat avec plusieurs laboratoires européens. Les enquêtes \
de terrain menées auprès des communautés de pêcheurs montrent que la \
[[pêche|Thematic]] demeure la première source de revenus, devant \
l'[[agriculture|Thematic]] vivrière. Les projections établies pour \
[[2050|Temporal]] indiquent que près d'un tiers des villages côtiers \
pourraient être exposés aux submersions marines. Une politique \
d'[[adaptation|Thematic]] fondée sur la restauration des mangroves et la \
diversification des activités économiques est discutée. La comparaison avec \
les atolls de l'[[océan Indien|ESA]] met en évidence des dynamiques \
similaires, mais une capacité institutionnelle très inégale selon les \
territoires concernés, notamment [[dans la région de [[Mahajanga|ESA]]|ESR]] \
où les moyens de suivi restent limités.
Les limites de la méthode tiennent à la résolution des images disponibles et à la rareté des relevés topographiques anciens, ce qui invite à interpréter les vitesses de recul estimées avec une certaine prudence méthodologique.
"""

DOCS["gold-03-fr"] = """\
Cet article propose un bilan des ressources hydriques du bassin du \
[[fleuve Niger|ESA]] et de leurs usages agricoles. Les données \
hydrométriques collectées de [[1970|Temporal]] à [[2000|Temporal]] sur les \
stations situées [[entre [[Bamako|ESA]] et [[Niamey|ESA]]|ESR]] témoignent \
d'une réduction sensible des débits moyens. La [[sécheresse|Thematic]] des \
[[années 1980|Temporal]] a durablement modifié les pratiques paysannes dans \
le [[Sahel|ESA]]. Les périmètres irrigués aménagés [[près de \
[[Ségou|ESA]]|ESR]] illustrent les promesses et les limites de la riziculture \
de décrue. Le [[maïs|Thematic]] et le [[mil|Thematic]] occupent désormais \
une place croissante dans les assolements, tandis que le [[riz|Thematic]] \
reste dominant dans les plaines inondables. L'[[Office du \
Niger|Organization]] gère le plus vaste ensemble irrigué de la région et \
annonce régulièrement des objectifs d'extension ambitieux. Nos analyses \
montrent cependant que la disponibilité en eau limite fortement ces \
perspectives, surtout si les tendances observées depuis [[janvier \
1995|Temporal]] se prolongent. La modélisation des écoulements suggère \
qu'une hausse de température de deux degrés réduirait les débits d'étiage \
d'environ quinze pour cent. Ces résultats soulignent l'urgence d'une \
gestion concertée des [[ressources en eau|Thematic]] à l'échelle du bassin, \
associant les pays riverains du [[fleuve Niger|ESA]], du plateau guinéen \
jusqu'au delta intérieur, et intégrant explicitement les scénarios de \
[[changement climatique|Thematic]] dans la planification.
Il conviendrait enfin d'étendre ce cadre d'analyse aux affluents secondaires et aux nappes alluviales, dont la contribution aux étiages demeure mal quantifiée faute de réseaux de mesure pérennes dans la plupart des sous-bassins.
"""

DOCS["gold-04-fr"] = """\
La présente contribution étudie la recomposition des systèmes agraires \
[[dans la région du [[Sine Saloum|ESA]]|ESR]] sous l'effet conjoint de la \
pression démographique et du [[changement climatique|Thematic]]. Les relevés \
parcellaires réalisés [[entre 2000 et 2015|Temporal]] dans une vingtaine de \
villages situés [[au sud de [[Thiès|ESA]]|ESR]] montrent une fragmentation \
continue des exploitations. La salinisation des terres, favorisée par la \
remontée des eaux marines dans les bras morts du delta, touche désormais \
près du quart des surfaces cultivables. Les rendements de \
l'[[arachide|Thematic]], pilier historique de l'économie régionale, stagnent \
depuis [[les années 1990|Temporal]]. Les ménages diversifient leurs revenus \
par le maraîchage, l'élevage de petits ruminants et les migrations \
saisonnières vers [[Dakar|ESA]]. L'[[ISRA|Organization]] développe des \
variétés de [[mil|Thematic]] à cycle court mieux adaptées au raccourcissement \
de la saison des pluies, et la [[FAO|Organization]] soutient des programmes \
de restauration des sols. Nos enquêtes révèlent toutefois que l'accès au \
crédit et la sécurisation foncière demeurent les premiers obstacles cités \
par les agriculteurs. Une typologie des trajectoires d'exploitation est \
proposée, distinguant intensification, diversification et décapitalisation. \
Ces résultats éclairent les débats sur la [[sécurité \
alimentaire|Thematic]] et sur les politiques d'[[adaptation|Thematic]] en \
zone soudano-sahélienne, [[entre [[Dakar|ESA]] et [[Bamako|ESA]]|ESR]].
Ces observations gagneraient à être complétées par un suivi longitudinal des ménages enquêtés, afin de distinguer les ajustements conjoncturels des transformations structurelles durables dans l'organisation du travail agricole familial.
"""

DOCS["gold-05-fr"] = """\
Cette note méthodologique présente un dispositif de suivi de la \
[[déforestation|Thematic]] sur les hautes terres centrales de \
[[Madagascar|ESA]]. À partir d'images satellitaires acquises de \
[[1985|Temporal]] à [[2015|Temporal]], nous cartographions l'évolution du \
couvert forestier [[autour du [[lac Alaotra|ESA]]|ESR]], principal grenier \
rizicole du pays. La surface forestière a diminué de moitié sur la période, \
au profit des cultures pluviales et des pâturages. Le [[riz|Thematic]] \
irrigué des plaines demeure la production centrale, mais la pression sur \
les versants s'accroît, avec des conséquences visibles sur \
l'[[érosion des sols|Thematic]] et l'envasement des canaux. Les feux de \
brousse, recensés mensuellement depuis [[janvier 2000|Temporal]], \
constituent le principal facteur de dégradation. Le \
[[FOFIFA|Organization]] anime un réseau de parcelles d'observation et \
propose des itinéraires techniques limitant le travail du sol. Les \
entretiens conduits avec les autorités locales soulignent la difficulté de \
concilier protection des forêts et besoins fonciers des jeunes ménages. Un \
scénario tendanciel projeté à l'horizon [[2040|Temporal]] aboutit à la \
quasi-disparition des forêts naturelles hors des aires protégées. Nous \
discutons enfin la transférabilité du dispositif à d'autres contextes \
insulaires de l'[[océan Indien|ESA]], notamment aux massifs forestiers \
situés [[au nord de [[Toliara|ESA]]|ESR]], où les dynamiques de défriche \
présentent des caractéristiques comparables.
Cette approche pourrait être enrichie par des capteurs de terrain à bas coût et par la participation des communautés villageoises à la validation des cartes produites, gage d'une meilleure appropriation locale des résultats obtenus.
"""

DOCS["gold-06-en"] = """\
This paper assesses the impacts of [[climate change|Thematic]] on smallholder \
farming systems [[in the [[Senegal River|ESA]] valley|ESR]]. Using household \
surveys collected [[from 1998 to 2014|Temporal]] in villages \
[[near [[Saint-Louis|ESA]]|ESR]], we document a steady decline in \
[[rainfall|Thematic]] during the growing season and an increased frequency \
of [[drought|Thematic]] years. Farmers respond by expanding \
[[irrigation|Thematic]] along the river and by shifting from \
[[millet|Thematic]] to shorter-cycle varieties of [[maize|Thematic]]. The \
[[CIRAD|Organization]] conducts long-term agronomic trials in the delta, \
and the [[FAO|Organization]] supports seed distribution programmes across \
the region. Our regression results indicate that access to irrigated plots \
reduces the probability of crop failure by one third. Migration to \
[[Dakar|ESA]] remains an important safety valve for younger household \
members, while remittances finance pump maintenance and fertilizer \
purchases. A comparison with rainfed districts located \
[[south of [[Thiès|ESA]]|ESR]] highlights the protective role of the river \
scheme during the severe drought of [[2011|Temporal]]. Projections for \
[[2050|Temporal]] nevertheless suggest that upstream dam operations and \
rising temperatures could reduce dry-season flows substantially. We argue \
that [[adaptation|Thematic]] policy should combine water management \
reforms with improved access to credit, and we discuss the implications \
for [[food security|Thematic]] throughout the lower basin, from \
[[Fouta Djallon|ESA]] to the [[Atlantic Ocean|ESA]].
These findings should be read alongside qualitative evidence on household decision making, since survey rounds cannot fully capture the informal arrangements through which families share water, labour, and land during difficult years.
"""

DOCS["gold-07-en"] = """\
We analyse deforestation dynamics and their hydrological consequences \
[[in [[Madagascar|ESA]]|ESR]]. Combining satellite imagery acquired \
[[between 1990 and 2015|Temporal]] with discharge records from gauging \
stations [[around [[Lake Alaotra|ESA]]|ESR]], we quantify the effect of \
forest loss on sediment transport. [[Deforestation|Thematic]] proceeded at \
roughly one percent per year over the study period, with marked \
acceleration after [[2005|Temporal]]. Sediment yields doubled in \
catchments where forest cover fell below twenty percent, degrading \
irrigated [[rice|Thematic]] fields downstream. The \
[[University of Antananarivo|Organization]] leads the monitoring network, \
and the [[World Bank|Organization]] funds terracing programmes in the most \
affected communes. Interviews with farmers reveal that charcoal production \
remains the main driver of clearing, followed by the extension of rainfed \
[[crops|Thematic]] on hillslopes. [[Soil erosion|Thematic]] now threatens \
the long-term viability of the lake fishery, a major source of protein for \
the region. Scenario modelling for [[the 2030s|Temporal]] indicates that \
continued clearing would reduce reservoir capacity by a further fifteen \
percent. We compare these findings with trends observed \
[[in the highlands of [[Toliara|ESA]]|ESR]] and along the \
[[Indian Ocean|ESA]] coast, and we outline a set of \
[[adaptation|Thematic]] measures combining community forestry, improved \
stoves, and payment schemes for watershed services supported by \
international donors.
The analysis would benefit from longer discharge records and from systematic field validation of classified imagery, particularly in mosaic landscapes where regrowth and degraded forest are difficult to separate reliably.
"""

DOCS["gold-08-en"] = """\
This study investigates shifts in seasonal [[rainfall|Thematic]] across the \
[[Sahel|ESA]] and their consequences for pastoral mobility. Rain-gauge \
series assembled [[from 1950 to 2010|Temporal]] show a pronounced dry \
anomaly during [[the 1980s|Temporal]], followed by a partial recovery after \
[[1995|Temporal]]. We couple these records with herd movement data \
collected [[between [[Bamako|ESA]] and [[Niamey|ESA]]|ESR]] to trace how \
transhumance corridors respond to forage availability. Results indicate \
that herders now travel on average eighty kilometres further south than in \
the reference period, increasing contact and occasional conflict with \
farming communities along the [[Niger River|ESA]]. The \
[[ILRI|Organization]] coordinates the livestock observatory, and national \
meteorological services provide decadal forecasts to pastoral associations \
by radio. Analysis of vegetation indices suggests that woody cover is \
recovering in parts of the central [[Sahel|ESA]], consistent with \
re-greening narratives, while degradation persists \
[[around [[Zinder|ESA]]|ESR]]. We examine how [[drought|Thematic]] early \
warning systems shaped destocking decisions during the crisis of \
[[2010|Temporal]]. The paper concludes that mobility remains the most \
effective [[adaptation|Thematic]] to rainfall variability, and that land \
tenure reforms restricting corridor access could undermine \
[[food security|Thematic]] for agropastoral households throughout the \
region, from [[Mauritania|ESA]] to [[Chad|ESA]].
These conclusions rest on sparse station coverage in the northern fringe, and we therefore treat estimated trends there as indicative rather than definitive pending the rehabilitation of additional gauges.
"""

DOCS["gold-09-en"] = """\
We present a basin-scale assessment of water allocation in the \
[[Wujiang River Basin|ESA]], a major tributary system of the upper \
[[Yangtze|ESA]]. Streamflow observations [[from 1980 to 2012|Temporal]] are \
combined with reservoir operation records to evaluate how hydropower \
development altered seasonal flow regimes. Winter flows increased by forty \
percent [[below the [[Wujiang River|ESA]] cascade|ESR]], while summer peaks \
were attenuated, with measurable effects on downstream sediment budgets. \
[[Irrigation|Thematic]] districts in the lower valley report improved \
supply reliability, although competition with urban demand from \
[[Chongqing|ESA]] is growing. The [[Chinese Academy of \
Sciences|Organization]] leads the observation programme, and provincial \
agencies publish annual allocation bulletins. Our modelling indicates that \
proposed additional storage would raise firm energy output by seven \
percent but reduce flood-recession [[agriculture|Thematic]] area by a \
comparable margin. Interviews conducted in [[March 2011|Temporal]] with \
district managers highlight persistent coordination problems between \
energy and agricultural authorities. Climate projections for the basin \
suggest more intense summer storms and a higher frequency of \
[[drought|Thematic]] in spring planting windows, complicating reservoir \
rule curves. We propose an adaptive allocation framework, tested in \
simulation over the drought of [[2011|Temporal]], and discuss its \
transferability to other monsoon-affected basins in southern \
[[China|ESA]], including catchments draining toward the \
[[Mekong River|ESA]].
The framework presented here deliberately abstracts from groundwater interactions, which remain poorly constrained in the karstic portions of the basin and deserve dedicated observation campaigns in future work.
"""

DOCS["gold-10-en"] = """\
This article examines flood risk governance in the lower \
[[Willamette River|ESA]] basin and its implications for urban planning in \
[[Oregon|ESA]]. Drawing on flood insurance claims filed \
[[between 1996 and 2016|Temporal]], we map the distribution of repetitive \
losses across floodplain neighbourhoods [[near [[Portland|ESA]]|ESR]]. \
Claim density correlates strongly with legacy development permitted before \
modern zoning, and weakly with recent [[rainfall|Thematic]] trends. The \
[[USGS|Organization]] operates the stream-gauge network used to calibrate \
our hydraulic model, and the state resilience office publishes periodic \
exposure assessments. Scenario analysis for [[the 2040s|Temporal]] combines \
downscaled precipitation projections with build-out assumptions from \
regional growth plans. Results suggest that channel-confining levees \
transfer risk downstream toward communities \
[[north of [[Salem|ESA]]|ESR]], raising questions of distributional equity. \
Managed retreat from the most exposed parcels would reduce expected annual \
damages by a quarter at a fraction of structural protection costs. We \
situate these findings within debates on [[climate change|Thematic]] \
[[adaptation|Thematic]] in mid-sized river basins of the Pacific \
Northwest, comparing institutional arrangements with those documented \
along the [[Columbia River|ESA]]. The analysis, updated in [[June \
2018|Temporal]], concludes that integrating insurance data into land-use \
review offers a low-cost pathway to steer development away from hazardous \
areas while preserving riparian habitat corridors.
The approach is transferable to other jurisdictions where claims data exist, although privacy restrictions on address-level records may require aggregation procedures that blur the fine spatial patterns documented here.
"""


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    total_words = 0
    for doc_id, marked in DOCS.items():
        text, spans = strip_marks(marked.rstrip("\n"))
        words = len(re.findall(r"[^\W_]+", text))
        total_words += words
        obj = {"docId": doc_id, "text": text, "spans": spans}
        (OUT / f"{doc_id}.json").write_text(
            json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        print(f"{doc_id}: {words} words, {len(spans)} spans")
    print(f"mean words: {total_words / len(DOCS):.1f}")


if __name__ == "__main__":
    main()
