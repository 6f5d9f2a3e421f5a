#!/usr/bin/env python3
"""Generates the offline mini fixture and its golden outputs.

The golden files come from the independent reference computations below
(segmentation, BM25, candidate pooling and the three measures), never from
the C++ pipeline itself.
"""

import argparse
import hashlib
import html
import math
import random
import re
import shutil
from collections import Counter, defaultdict
from datetime import datetime, timedelta, timezone
from pathlib import Path

SEED = 20060301
TARGET = "20060301000000"
GAP = 30 * 60
MIN_QUERIES = 2
DEPTH = 20
K1, B = 1.2, 0.75
SPLITS = {
    "train": ("2006-03-01", "2006-04-15"),
    "dev": ("2006-04-15", "2006-05-01"),
    "test": ("2006-05-01", "2006-06-01"),
}

TOPICS = [
    ("boats", ["marine", "sailing", "yacht", "harbor"]),
    ("music", ["guitar", "piano", "band", "lessons"]),
    ("bank", ["credit", "loans", "savings", "online"]),
    ("travel", ["hotel", "flights", "vacation", "cruise"]),
    ("cars", ["auto", "dealer", "used", "parts"]),
    ("recipes", ["cooking", "food", "kitchen", "baking"]),
    ("weather", ["forecast", "radar", "storm", "local"]),
    ("news", ["daily", "sports", "local", "county"]),
    ("golf", ["club", "course", "tee", "pro"]),
    ("pets", ["dog", "cat", "vet", "supplies"]),
    ("health", ["clinic", "medical", "family", "care"]),
    ("realty", ["homes", "sale", "property", "rent"]),
]
STEMS = ["blue", "kenne", "stein", "oak", "river", "pine", "north", "silver", "maple", "cedar", "lake", "granite",
         "harbor", "eagle", "summit", "valley", "red", "golden", "stone", "west"]
ENDS = ["fin", "bec", "way", "ridge", "side", "crest", "field", "brook", "wood", "view", "point", "mont", "land"]
GENERIC = ["Welcome", "Home Page", "Untitled Document", "Welcome to our site", "Index", "Main Page"]

EN = [
    "Our family owned business has served the community for over twenty years.",
    "Please call our friendly staff during business hours for more information.",
    "We offer competitive prices and a wide selection for every budget.",
    "Visit our showroom or browse the catalog online at your convenience.",
    "New customers receive a free consultation with one of our experts.",
    "Read what our customers are saying about their experience with us.",
    "The store is open every day of the week except on major holidays.",
    "Sign up for the newsletter to hear about seasonal offers and events.",
]
OTHER = {
    "de": ["Unser Familienbetrieb ist seit vielen Jahren in der Stadt tätig und freut sich auf Ihren Besuch.",
           "Bitte rufen Sie uns während der Öffnungszeiten an, wenn Sie weitere Fragen haben.",
           "Wir bieten günstige Preise und eine große Auswahl für jeden Geschmack.",
           "Neue Kunden erhalten eine kostenlose Beratung durch unsere Mitarbeiter.",
           "Das Geschäft ist an allen Wochentagen außer an den Feiertagen geöffnet."],
    "fr": ["Notre entreprise familiale est au service de la région depuis plus de vingt ans.",
           "Veuillez contacter notre équipe pendant les heures d'ouverture pour plus de renseignements.",
           "Nous proposons des prix avantageux et un grand choix pour tous les budgets.",
           "Les nouveaux clients bénéficient d'une consultation gratuite avec un de nos conseillers.",
           "Le magasin est ouvert tous les jours de la semaine sauf les jours fériés."],
    "es": ["Nuestra empresa familiar ha servido a la comunidad durante más de veinte años.",
           "Por favor llame a nuestro personal durante el horario de atención para más información.",
           "Ofrecemos precios competitivos y una amplia selección para todos los presupuestos.",
           "Los nuevos clientes reciben una consulta gratuita con uno de nuestros expertos.",
           "La tienda está abierta todos los días de la semana excepto los días festivos."],
    "nl": ["Ons familiebedrijf staat al meer dan twintig jaar klaar voor de mensen in de buurt.",
           "Bel gerust met onze medewerkers tijdens de openingstijden als u vragen heeft.",
           "Wij bieden scherpe prijzen en een ruime keuze voor elk budget.",
           "Nieuwe klanten krijgen een gratis adviesgesprek met een van onze specialisten.",
           "De winkel is elke dag van de week open behalve op officiële feestdagen."],
}

PNG = b"\x89PNG\r\n\x1a\n\x00\x00\x00\rIHDR\x00\x00\x00\x01\x00\x00\x00\x01\x08\x06\x00\x00\x00"


def epoch(date):
    return int(datetime.strptime(date, "%Y-%m-%d").replace(tzinfo=timezone.utc).timestamp())


def ts14_epoch(ts):
    return int(datetime.strptime(ts, "%Y%m%d%H%M%S").replace(tzinfo=timezone.utc).timestamp())


def log_time(t):
    return datetime.fromtimestamp(t, tz=timezone.utc).strftime("%Y-%m-%d %H:%M:%S")


def tokenize(text):
    return [t.lower() for t in re.findall(r"[A-Za-z0-9]+", text)]


def doc_id(url):
    return hashlib.md5(url.encode()).hexdigest()[:12]


class Site:
    def __init__(self, n, rng):
        self.n = n
        self.topic, self.words = TOPICS[n % len(TOPICS)]
        self.brand = STEMS[n % len(STEMS)] + ENDS[(n * 7 + n // len(STEMS)) % len(ENDS)]
        self.host = "www." + self.brand + self.topic + ".com"
        self.url = "http://" + self.host
        self.descriptive = n % 2 == 0
        w = rng.sample(self.words, 2)
        if self.descriptive:
            self.title = f"{self.brand.capitalize()} {self.topic.capitalize()} - {w[0].capitalize()} & {w[1].capitalize()}"
        else:
            self.title = rng.choice(GENERIC) + (f" {w[0]} {self.topic}" if n % 4 == 1 else "")
        self.lang = "en"
        if n % 10 == 3:
            self.lang = ["de", "fr", "es", "nl"][(n // 10) % 4]


def build_sites(rng):
    sites = [Site(n, rng) for n in range(206)]
    # Distinct hosts are required; the stem/end grid guarantees it for this range.
    assert len({s.url for s in sites}) == len(sites)
    return sites


def page_html(site, rng):
    sentences = EN if site.lang == "en" else OTHER[site.lang]
    body = " ".join(rng.sample(sentences, len(sentences)))
    words = " ".join(site.words)
    charset = "utf-8" if site.n % 3 else "windows-1252"
    text = (
        f"<html><head><meta http-equiv=\"Content-Type\" content=\"text/html; charset={charset}\">"
        f"<title>{html.escape(site.title, quote=False)}</title>"
        "<style>body { font-family: serif; }</style>"
        "<script>var tracker = '<b>not text</b>';</script></head>"
        f"<body><h1>{html.escape(site.title, quote=False)}</h1><p>{body}</p>"
        f"<p>{words}</p><!-- footer --></body></html>\n"
    )
    return text.encode("utf-8" if charset == "utf-8" else "cp1252")


def make_archive(sites, rng, out):
    """Captures per site. Returns {url: (timestamp, status)} of the closest capture."""
    pages = out / "archive" / "pages"
    pages.mkdir(parents=True)
    rows = []
    closest = {}
    target = ts14_epoch(TARGET)
    for s in sites:
        if s.n in (13, 77, 150):
            continue  # never archived
        caps = []
        for k in range(1 + s.n % 3):
            day = datetime(2005, 6, 1) + timedelta(days=rng.randrange(0, 700), seconds=rng.randrange(86400))
            caps.append(day.strftime("%Y%m%d%H%M%S"))
        caps = sorted(set(caps))
        best = min(caps, key=lambda c: (abs(ts14_epoch(c) - target), c))
        for c in caps:
            status = 404 if s.n == 41 and c == best else 200
            if s.n in (58, 119) and c == best:
                name = f"pages/{s.n:03d}-{c}.png"
                (out / "archive" / name).write_bytes(PNG)
                rows.append((s.url, c, status, name, "image/png"))
            else:
                name = f"pages/{s.n:03d}-{c}.html"
                (out / "archive" / name).write_bytes(page_html(s, rng))
                rows.append((s.url, c, status, name, "text/html"))
        closest[s.url] = (best, 404 if s.n == 41 else 200)
    with open(out / "archive" / "archive.tsv", "w") as f:
        f.write("# url\ttimestamp\tstatus\tfile\tcontent_type\n")
        for r in rows:
            f.write("\t".join(map(str, r)) + "\n")
    return closest


def make_log(sites, rng):
    """Rows (user, query, time, rank, url) grouped by user, time-sorted."""
    start, end = epoch("2006-03-01"), epoch("2006-06-01")
    unclicked = [s for s in sites]
    rng.shuffle(unclicked)
    rows = []
    for u in range(30):
        user = str(2000 + u * 37)
        t = start + rng.randrange(0, 86400 * 5)
        while t < end - 86400:
            for q in range(rng.randint(1, 5)):
                site = unclicked.pop() if unclicked else rng.choice(sites)
                kind = rng.random()
                if kind < 0.45:
                    query = site.brand + site.topic + " " + rng.choice(site.words)
                elif kind < 0.7:
                    query = f"{site.brand} {site.topic}"
                elif kind < 0.9:
                    query = " ".join(rng.sample(site.words, 2)) + " " + site.topic
                else:
                    query = "www " + site.brand + site.topic + " com"
                if rng.random() < 0.1:
                    rows.append((user, query, t, "", ""))
                    t += rng.randrange(5, 60)
                rank = rng.randint(1, 10)
                rows.append((user, query, t, str(rank), site.url))
                if rng.random() < 0.15:
                    other = rng.choice(sites)
                    t += rng.randrange(5, 90)
                    rows.append((user, query, t, str(rank + 1), other.url))
                t += rng.choice([rng.randrange(10, 1500), GAP - 1])
            t += rng.choice([GAP, GAP + 1, rng.randrange(GAP, 86400 * 9)])
    return rows


def write_log(rows, out):
    logs = out / "logs"
    logs.mkdir()
    with open(logs / "user-ct-test-collection-01.txt", "w") as f:
        f.write("AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n")
        for i, (user, query, t, rank, url) in enumerate(rows):
            f.write(f"{user}\t{query}\t{log_time(t)}\t{rank}\t{url}\n")
            if i == 40:
                f.write(f"{user}\tbroken row without time\n")
            if i == 400:
                f.write(f"{user}\tbad time\t2006-02-30 10:00:00\t\t\n")


def segment(rows, resolve):
    sessions = []
    prev = None
    count = 0
    for user, query, t, rank, url in rows:
        if prev is None or prev[0] != user:
            count = 0
        if prev is None or prev[0] != user or t - prev[2] >= GAP:
            sessions.append({"id": f"{user}-{count}", "user": user, "queries": []})
            count += 1
        qs = sessions[-1]["queries"]
        if not qs or qs[-1]["text"] != query:
            qs.append({"text": query, "time": t, "clicks": []})
        if url and url in resolve and resolve[url] not in qs[-1]["clicks"]:
            qs[-1]["clicks"].append(resolve[url])
        prev = (user, query, t)
    return sessions


class Index:
    def __init__(self, docs):
        self.docs = docs  # {doc_id: tokens}
        self.n = len(docs)
        self.avg = sum(len(v) for v in docs.values()) / self.n
        self.df = Counter()
        for toks in docs.values():
            self.df.update(set(toks))

    def idf(self, term):
        return max(0.0, math.log((self.n - self.df[term] + 0.5) / (self.df[term] + 0.5)))

    def score(self, query, d):
        toks = self.docs[d]
        s = 0.0
        for term in sorted(set(query)):
            tf = toks.count(term)
            if tf > 0:
                norm = len(toks) / self.avg
                s += self.idf(term) * tf * (K1 + 1.0) / (tf + K1 * (1.0 - B + B * norm))
        return s

    def ranked(self, query, ids):
        return sorted(((d, self.score(query, d)) for d in ids), key=lambda x: (-x[1], _desc(x[0])))


def _desc(s):
    return tuple(-ord(c) for c in s) + (1,)


def measures(ranking, relevant):
    hits, ap, rr = 0, 0.0, 0.0
    for i, d in enumerate(ranking, 1):
        if d in relevant:
            hits += 1
            ap += hits / i
            if rr == 0.0:
                rr = 1.0 / i
    return ap / len(relevant), rr, 1.0 if ranking and ranking[0] in relevant else 0.0


def write_config(out):
    lines = [
        "# Offline fixture: run against tools/mock_archive_server --dir archive",
        "log_dir = logs",
        "old_titles = old_titles.tsv",
        "work_dir = work",
        "archive_endpoint = http://127.0.0.1:8089/wayback/available",
        f"target_timestamp = {TARGET}",
        "max_concurrency = 2",
        "min_request_interval_ms = 2",
        "max_retries = 2",
        "backoff_base_ms = 10",
        "request_timeout_ms = 5000",
        f"gap_threshold = {GAP}",
        f"min_queries = {MIN_QUERIES}",
    ]
    lines += [f"split_{k} = {a}/{b}" for k, (a, b) in SPLITS.items()]
    lines += [
        "eval_split = test",
        f"bm25_k1 = {K1}",
        f"bm25_b = {B}",
        f"candidate_depth = {DEPTH}",
        "divergent_sample = 10",
        "divergent_threshold = 0.25",
        "seed = 7",
    ]
    (out / "snapcorpus.conf").write_text("\n".join(lines) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", required=True)
    out = Path(ap.parse_args().out)
    if out.exists():
        shutil.rmtree(out)
    out.mkdir(parents=True)
    rng = random.Random(SEED)

    sites = build_sites(rng)
    closest = make_archive(sites, rng, out)
    rows = make_log(sites, rng)
    write_log(rows, out)

    universe = Counter(url for *_, url in rows if url)
    located = {u: ts for u, (ts, status) in closest.items() if status == 200}
    mapping = {u: doc_id(u) for u in located}
    by_url = {s.url: s for s in sites}
    docs = {mapping[u]: by_url[u] for u in located if by_url[u].n not in (58, 119)}

    # Old corpus: most current documents (some retitled), plus URLs the new
    # crawl could not recover.
    old_rows = []
    for i, s in enumerate(sites):
        if s.n % 7 == 5:
            continue
        if i % 5 == 0:
            title = s.title
        elif i % 5 == 1:
            title = f"{s.brand.capitalize()} {s.topic.capitalize()}"
        elif i % 5 == 2:
            title = "Under construction"
        elif i % 5 == 3:
            title = ""
        else:
            title = s.title + " - " + s.words[0]
        old_rows.append((doc_id(s.url), title, s.url))
    with open(out / "old_titles.tsv", "w") as f:
        for r in sorted(old_rows):
            f.write("\t".join(r) + "\n")

    write_config(out)

    golden = out / "golden"
    golden.mkdir()
    with open(golden / "universe.tsv", "w") as f:
        for u in sorted(universe):
            f.write(f"{u}\t{universe[u]}\n")
    with open(golden / "mapping.tsv", "w") as f:
        for u in sorted(located, key=lambda u: mapping[u]):
            f.write(f"{mapping[u]}\t{u}\t{located[u]}\t/web/{located[u]}/{u}\n")
    with open(golden / "languages.tsv", "w") as f:
        for d in sorted(docs):
            f.write(f"{d}\t{docs[d].lang}\n")

    a = {s.url for s in docs.values()}
    b = {r[2] for r in old_rows}
    with open(golden / "set_report.tsv", "w") as f:
        for name, v in [("|A|", len(a)), ("|B|", len(b)), ("|A \\ B|", len(a - b)), ("|B \\ A|", len(b - a)),
                        ("|A ∪ B|", len(a | b)), ("|A ∩ B|", len(a & b)), ("universe", len(universe))]:
            f.write(f"{name}\t{v}\n")
    old_titles = {r[0]: r[1] for r in old_rows}
    pairs = exact_one = exact_zero = quarter = both_empty = 0
    for d, s in docs.items():
        if d not in old_titles:
            continue
        x, y = set(tokenize(s.title)), set(tokenize(old_titles[d]))
        if not x and not y:
            both_empty += 1
            continue
        j = len(x & y) / len(x | y)
        pairs += 1
        exact_one += j == 1.0
        exact_zero += j == 0.0
        quarter += j <= 0.25
    with open(golden / "jaccard.tsv", "w") as f:
        f.write(f"pairs\t{pairs}\nexact_one\t{exact_one}\nexact_zero\t{exact_zero}\n"
                f"at_most_quarter\t{quarter}\nboth_empty\t{both_empty}\n")

    resolve = {u: mapping[u] for u in mapping}
    sessions = [s for s in segment(rows, resolve) if len({q["text"] for q in s["queries"]}) >= MIN_QUERIES]
    ranges = {k: (epoch(v[0]), epoch(v[1])) for k, v in SPLITS.items()}
    split_of = {}
    for s in sessions:
        t = s["queries"][0]["time"]
        split_of[s["id"]] = next((k for k, (lo, hi) in ranges.items() if lo <= t < hi), None)
    with open(golden / "sessions.tsv", "w") as f:
        for k in SPLITS:
            mine = [s for s in sessions if split_of[s["id"]] == k]
            f.write(f"{k}\t{len(mine)}\t{sum(len(s['queries']) for s in mine)}\n")

    title_idx = Index({d: tokenize(s.title) for d, s in docs.items()})
    url_idx = Index({d: tokenize(s.title) + tokenize(s.url) for d, s in docs.items()})
    results = {"bm25": [], "bm25_url": []}
    excluded = 0
    for s in sessions:
        if split_of[s["id"]] != "test":
            continue
        for i, q in enumerate(s["queries"]):
            query = tokenize(q["text"])
            terms = set(query)
            matching = [d for d, toks in title_idx.docs.items() if terms & set(toks)]
            pool = [d for d, _ in title_idx.ranked(query, matching)[:DEPTH]]
            clicked = [c for c in q["clicks"] if c in docs]
            pool_set = set(pool) | set(clicked)
            if not pool_set:
                continue
            relevant = set(clicked)
            if not relevant:
                excluded += 1
                continue
            for name, idx in (("bm25", title_idx), ("bm25_url", url_idx)):
                ranking = [d for d, _ in idx.ranked(query, pool_set)]
                results[name].append(measures(ranking, relevant))
    with open(golden / "eval.tsv", "w") as f:
        f.write("system\tMAP\tMRR\tP@1\tqueries\texcluded\n")
        for name, vals in results.items():
            n = len(vals)
            means = [sum(v[k] for v in vals) / n for k in range(3)]
            f.write(f"{name}\t{means[0]:.4f}\t{means[1]:.4f}\t{means[2]:.4f}\t{n}\t{excluded}\n")


if __name__ == "__main__":
    main()
