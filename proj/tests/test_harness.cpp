#include <catch2/catch_amalgamated.hpp>

#include <latfact/harness.hpp>

using namespace latfact;

namespace {

BenchRow sample_row() {
    BenchRow r;
    r.heuristic = HeuristicKind::babai_only;
    r.bits = 15;
    r.dim = 7;
    r.lattices = 490.0;
    r.candidates = 490.0;
    r.total_sr = 352.33;
    r.unique_sr = 37.67;
    r.unique_pct = 8.26;
    r.time_seconds = 0.7;
    return r;
}

void check_rows_equal_modulo_time(const BenchRow& a, const BenchRow& b) {
    CHECK(a.heuristic == b.heuristic);
    CHECK(a.bits == b.bits);
    CHECK(a.dim == b.dim);
    CHECK(a.lattices == b.lattices);
    CHECK(a.candidates == b.candidates);
    CHECK(a.total_sr == b.total_sr);
    CHECK(a.unique_sr == b.unique_sr);
    CHECK(a.unique_pct == b.unique_pct);
}

void check_records_equal_modulo_time(const ExperimentRecord& a, const ExperimentRecord& b) {
    CHECK(a.n == b.n);
    CHECK(a.n_bits == b.n_bits);
    CHECK(a.m == b.m);
    CHECK(a.c == b.c);
    CHECK(a.M == b.M);
    CHECK(a.lattices_tested == b.lattices_tested);
    CHECK(a.candidates_extracted == b.candidates_extracted);
    CHECK(a.total_sr_pairs == b.total_sr_pairs);
    CHECK(a.unique_sr_pairs == b.unique_sr_pairs);
    CHECK(a.unique_per_lattice_pct == b.unique_per_lattice_pct);
    CHECK(a.heuristic == b.heuristic);
    CHECK(a.seed == b.seed);
    CHECK(a.outcome == b.outcome);
}

}  // namespace

TEST_CASE("csv header matches the fixed column order") {
    CHECK(csv_header() ==
          "Input bit length,Lattice dimension,Lattices tested,Candidates extracted,"
          "Total SR pairs,Unique SR pairs,Unique SR per lattice %,Time (s)");
}

TEST_CASE("csv row formats fixed-point columns") {
    CHECK(csv_row(sample_row()) == "15,7,490.0,490.0,352.33,37.67,8.26,0.70");

    BenchRow no_pct = sample_row();
    no_pct.unique_pct.reset();
    no_pct.lattices = 3046.5;
    no_pct.candidates = 3046.53;  // rounds to one decimal
    CHECK(csv_row(no_pct) == "15,7,3046.5,3046.5,352.33,37.67,,0.70");
}

TEST_CASE("bench csv groups rows into per-heuristic blocks") {
    BenchRow b15 = sample_row();
    BenchRow b20 = sample_row();
    b20.bits = 20;
    b20.dim = 8;
    BenchRow l15 = sample_row();
    l15.heuristic = HeuristicKind::local_search;

    auto text = bench_csv({b15, b20, l15});
    std::string expect;
    expect += "# heuristic: babai\n";
    expect += csv_header() + "\n";
    expect += csv_row(b15) + "\n";
    expect += csv_row(b20) + "\n";
    expect += "\n";
    expect += "# heuristic: local-search\n";
    expect += csv_header() + "\n";
    expect += csv_row(l15) + "\n";
    CHECK(text == expect);

    CHECK(bench_csv({}).empty());
}

TEST_CASE("experiment records round-trip through json") {
    ExperimentRecord rec;
    rec.n = Int("123456789012345678901234567890");
    rec.n_bits = 97;
    rec.m = 12;
    rec.c = 3.0;
    rec.M = 144;
    rec.lattices_tested = 42;
    rec.candidates_extracted = 672;
    rec.total_sr_pairs = 30;
    rec.unique_sr_pairs = 17;
    rec.unique_per_lattice_pct = 40.476190476190474;
    rec.wall_time_seconds = 1.25;
    rec.heuristic = HeuristicKind::qaoa_round;
    rec.seed = 0xDEADBEEFCAFEF00DULL;
    rec.outcome = Outcome::factored;

    auto j = record_to_json(rec);
    CHECK(j.at("n").get<std::string>() == "123456789012345678901234567890");
    CHECK(j.at("heuristic").get<std::string>() == "qaoa");
    CHECK(j.at("outcome").get<std::string>() == "factored");
    check_records_equal_modulo_time(record_from_json(j), rec);
    CHECK(record_from_json(j).wall_time_seconds == rec.wall_time_seconds);

    SECTION("absent percentage serializes as null") {
        rec.unique_per_lattice_pct.reset();
        rec.outcome = Outcome::budget_exhausted;
        auto j2 = record_to_json(rec);
        CHECK(j2.at("unique_per_lattice_pct").is_null());
        CHECK(j2.at("outcome").get<std::string>() == "budget-exhausted");
        auto back = record_from_json(j2);
        CHECK_FALSE(back.unique_per_lattice_pct.has_value());
        CHECK(back.outcome == Outcome::budget_exhausted);
    }

    SECTION("jsonl line parses back") {
        auto line = record_to_jsonl(rec);
        CHECK(line.find('\n') == std::string::npos);
        check_records_equal_modulo_time(record_from_json(nlohmann::json::parse(line)), rec);
    }

    SECTION("unknown outcome rejected") {
        auto j3 = record_to_json(rec);
        j3["outcome"] = "mystery";
        CHECK_THROWS_AS(record_from_json(j3), std::invalid_argument);
    }
}

TEST_CASE("curve text is two columns") {
    auto text = curve_text({{1.0, 1.0}, {2.0, 0.30685281944}});
    CHECK(text == "1 1\n2 0.3068528194\n");
}

TEST_CASE("run_bench validates its configuration") {
    BenchConfig cfg;
    cfg.bit_lengths = {};
    CHECK_THROWS_AS(run_bench(cfg), std::invalid_argument);
    cfg.bit_lengths = {9};
    CHECK_THROWS_AS(run_bench(cfg), std::invalid_argument);
    cfg.bit_lengths = {11};
    cfg.trials = 0;
    CHECK_THROWS_AS(run_bench(cfg), std::invalid_argument);
}

TEST_CASE("run_bench averages trials and shares semiprimes across heuristics") {
    BenchConfig cfg;
    cfg.bit_lengths = {11};
    cfg.trials = 3;
    cfg.master_seed = 7;
    auto res = run_bench(cfg);

    REQUIRE(res.rows.size() == 2);  // defaults: babai then local-search
    CHECK(res.rows[0].heuristic == HeuristicKind::babai_only);
    CHECK(res.rows[1].heuristic == HeuristicKind::local_search);
    REQUIRE(res.records.size() == 6);

    for (const auto& row : res.rows) {
        CHECK(row.bits == 11);
        CHECK(row.dim == 6);  // every 11-bit input resolves to dimension 6
    }
    for (const auto& rec : res.records) {
        CHECK(rec.n_bits == 11);
        CHECK(rec.outcome == Outcome::factored);
    }

    // identical trial inputs for both heuristics
    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(res.records[t].n == res.records[3 + t].n);
        CHECK(res.records[t].seed == res.records[3 + t].seed);
        CHECK(res.records[t].seed == bench_trial_seed(7, 11, t));
    }

    // rows are the means of their trials
    for (std::size_t r = 0; r < 2; ++r) {
        double lat = 0, uni = 0, pct = 0;
        for (std::size_t t = 0; t < 3; ++t) {
            const auto& rec = res.records[3 * r + t];
            lat += static_cast<double>(rec.lattices_tested);
            uni += static_cast<double>(rec.unique_sr_pairs);
            pct += rec.unique_per_lattice_pct.value();
        }
        CHECK_THAT(res.rows[r].lattices, Catch::Matchers::WithinRel(lat / 3, 1e-12));
        CHECK_THAT(res.rows[r].unique_sr, Catch::Matchers::WithinRel(uni / 3, 1e-12));
        REQUIRE(res.rows[r].unique_pct.has_value());
        CHECK_THAT(*res.rows[r].unique_pct, Catch::Matchers::WithinRel(pct / 3, 1e-12));
    }
}

TEST_CASE("run_bench output is deterministic across reruns and worker counts") {
    auto run = [](std::size_t workers) {
        BenchConfig cfg;
        cfg.bit_lengths = {11, 13};
        cfg.trials = 2;
        cfg.master_seed = 42;
        cfg.workers = workers;
        HeuristicConfig h;
        h.kind = HeuristicKind::local_search;
        h.k = 3;
        cfg.heuristics = {h};
        return run_bench(cfg);
    };
    auto a = run(1), b = run(1), c = run(3);
    REQUIRE(a.rows.size() == 2);
    for (const auto* other : {&b, &c}) {
        REQUIRE(other->rows.size() == a.rows.size());
        REQUIRE(other->records.size() == a.records.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i)
            check_rows_equal_modulo_time(a.rows[i], other->rows[i]);
        for (std::size_t i = 0; i < a.records.size(); ++i)
            check_records_equal_modulo_time(a.records[i], other->records[i]);
    }
}

TEST_CASE("run_bench honours explicit parameter overrides") {
    BenchConfig cfg;
    cfg.bit_lengths = {11};
    cfg.trials = 1;
    cfg.budget_lattices = 2000;  // a 3-dim lattice may not factor every input
    cfg.m = 3;
    cfg.c = 1.5;
    cfg.M = 15;
    HeuristicConfig h;
    h.kind = HeuristicKind::exact_min;
    cfg.heuristics = {h};
    auto res = run_bench(cfg);
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].m == 3);
    CHECK(res.records[0].M == 15);
    CHECK(res.records[0].c == 1.5);
    CHECK(res.rows[0].dim == 3);
}
