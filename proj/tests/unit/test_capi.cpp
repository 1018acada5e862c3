#include <symqfi/symqfi.h>

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string take(char *s) {
    std::string out = s ? s : "";
    symqfi_string_free(s);
    return out;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const char *name) {
    const fs::path dir = fs::temp_directory_path() / (std::string("symqfi_capi_") + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

symqfi_config *small_config(uint64_t seed) {
    symqfi_config *cfg = nullptr;
    REQUIRE(symqfi_config_new(&cfg) == SYMQFI_OK);
    const int ns[] = {4, 6};
    const int ks[] = {2, 3};
    REQUIRE(symqfi_config_set_n_list(cfg, ns, 2) == SYMQFI_OK);
    REQUIRE(symqfi_config_set_k_list(cfg, ks, 2) == SYMQFI_OK);
    REQUIRE(symqfi_config_set_samples(cfg, 10) == SYMQFI_OK);
    REQUIRE(symqfi_config_set_master_seed(cfg, seed) == SYMQFI_OK);
    return cfg;
}

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(symqfi_version()) == SYMQFI_VERSION);
    CHECK(std::string(symqfi_status_name(SYMQFI_ERR_NUMERICAL)) == "numerical failure");
    CHECK(std::string(symqfi_status_name(SYMQFI_OK)) == "ok");
}

TEST_CASE("operators") {
    symqfi_operator *op = nullptr;
    REQUIRE(symqfi_correlator(2, 2, 0, 0, &op) == SYMQFI_OK);
    CHECK(symqfi_operator_n_qubits(op) == 2);
    double re = 0, im = 0;
    REQUIRE(symqfi_operator_entry(op, 0, 2, &re, &im) == SYMQFI_OK);
    CHECK(re == doctest::Approx(0.25));
    CHECK(im == 0.0);
    CHECK(symqfi_operator_entry(op, 3, 0, &re, &im) == SYMQFI_ERR_INVALID_ARGUMENT);
    const std::string json = [&] {
        char *s = nullptr;
        REQUIRE(symqfi_operator_to_json(op, &s) == SYMQFI_OK);
        return take(s);
    }();
    CHECK(json.find("\"n_qubits\":2") != std::string::npos);
    symqfi_operator_free(op);

    symqfi_operator *a = nullptr, *b = nullptr;
    REQUIRE(symqfi_correlator(5, 1, 2, 1, &a) == SYMQFI_OK);
    REQUIRE(symqfi_brute_force_correlator(5, 1, 2, 1, &b) == SYMQFI_OK);
    double worst = 0.0;
    for(int r = 0; r <= 5; ++r)
        for(int c = 0; c <= 5; ++c) {
            double ar, ai, br, bi;
            symqfi_operator_entry(a, r, c, &ar, &ai);
            symqfi_operator_entry(b, r, c, &br, &bi);
            worst = std::max(worst, std::hypot(ar - br, ai - bi));
        }
    CHECK(worst < 1e-10);
    symqfi_operator_free(a);
    symqfi_operator_free(b);

    REQUIRE(symqfi_total_spin_squared(4, &op) == SYMQFI_OK);
    symqfi_operator_entry(op, 1, 1, &re, &im);
    CHECK(re == doctest::Approx(6.0));
    symqfi_operator_free(op);

    CHECK(symqfi_one_body_operator('q', 3, &op) == SYMQFI_ERR_INVALID_ARGUMENT);
    CHECK(std::string(symqfi_last_error()).size() > 0);
    CHECK(symqfi_correlator(3, 2, 2, 0, &op) == SYMQFI_ERR_INVALID_ARGUMENT);
    CHECK(symqfi_count_correlators(3) == 10);
    CHECK(symqfi_total_terms(3) == 20);
}

TEST_CASE("states and QFI") {
    symqfi_state *d = nullptr;
    REQUIRE(symqfi_state_dicke(4, 2, &d) == SYMQFI_OK);
    double f = 0.0;
    for(symqfi_route route : {SYMQFI_ROUTE_SYMMETRIC, SYMQFI_ROUTE_VARIANCE, SYMQFI_ROUTE_FULL_ORACLE}) {
        REQUIRE(symqfi_qfi(d, "linear-phase", 0.4, route, &f) == SYMQFI_OK);
        CHECK(f == doctest::Approx(12.0).epsilon(1e-10));
    }
    // Routes agree for the rotating generator as well.
    double sym = 0, var = 0, full = 0;
    REQUIRE(symqfi_qfi(d, "rotating", 1.3, SYMQFI_ROUTE_SYMMETRIC, &sym) == SYMQFI_OK);
    REQUIRE(symqfi_qfi(d, "rotating", 1.3, SYMQFI_ROUTE_VARIANCE, &var) == SYMQFI_OK);
    REQUIRE(symqfi_qfi(d, "rotating", 1.3, SYMQFI_ROUTE_FULL_ORACLE, &full) == SYMQFI_OK);
    CHECK(var == doctest::Approx(sym).epsilon(1e-9));
    CHECK(full == doctest::Approx(sym).epsilon(1e-9));

    char *json = nullptr;
    REQUIRE(symqfi_qfi_json(d, "rotating", 1.3, SYMQFI_ROUTE_SYMMETRIC, &json) == SYMQFI_OK);
    CHECK(take(json).find("\"route\":\"symmetric\"") != std::string::npos);
    CHECK(symqfi_qfi(d, "bogus", 0.0, SYMQFI_ROUTE_SYMMETRIC, &f) == SYMQFI_ERR_INVALID_ARGUMENT);
    symqfi_state_free(d);

    const double re[] = {3.0, 0.0};
    const double im[] = {0.0, 4.0};
    symqfi_state *s = nullptr;
    double dev = 0.0;
    REQUIRE(symqfi_state_from_amplitudes(1, re, im, 2, &dev, &s) == SYMQFI_OK);
    CHECK(dev == doctest::Approx(4.0));
    symqfi_state_free(s);
    CHECK(symqfi_state_from_amplitudes(2, re, im, 2, &dev, &s) == SYMQFI_ERR_INVALID_ARGUMENT);

    const fs::path dir = scratch_dir("state");
    std::ofstream(dir / "bad.json") << "{\"n_qubits\": 1, \"re\": [1]";
    CHECK(symqfi_state_from_file((dir / "bad.json").c_str(), &dev, &s) == SYMQFI_ERR_CONFIG);
    CHECK(symqfi_state_from_file((dir / "missing.json").c_str(), &dev, &s) == SYMQFI_ERR_CONFIG);
}

TEST_CASE("bounds") {
    double v = 0.0;
    REQUIRE(symqfi_qfi_upper_bound("linear-phase", 0.0, 10, &v) == SYMQFI_OK);
    CHECK(v == doctest::Approx(100.0));
    REQUIRE(symqfi_rotating_envelope(2, &v) == SYMQFI_OK);
    CHECK(v == doctest::Approx(16.0 * std::sin(1.0) * std::sin(1.0)));
    REQUIRE(symqfi_cramer_rao(16.0, &v) == SYMQFI_OK);
    CHECK(v == doctest::Approx(0.25));
    CHECK(symqfi_cramer_rao(0.0, &v) == SYMQFI_ERR_INVALID_ARGUMENT);
    REQUIRE(symqfi_tradeoff_bound(10, 0.1, &v) == SYMQFI_OK);
    CHECK(v == doctest::Approx(60.0));
    CHECK(symqfi_qfi_upper_bound("linear-phase", 0.0, 10, nullptr) == SYMQFI_ERR_INVALID_ARGUMENT);
}

TEST_CASE("configuration errors carry key paths") {
    symqfi_config *cfg = nullptr;
    CHECK(symqfi_config_from_json("{\"N_list\":[4],\"sampls\":3}", &cfg) == SYMQFI_ERR_CONFIG);
    CHECK(std::string(symqfi_last_error_key()) == "sampls");
    CHECK(symqfi_config_from_json("{not json", &cfg) == SYMQFI_ERR_CONFIG);

    REQUIRE(symqfi_config_from_json("{\"N_list\":[4],\"k_list\":[5]}", &cfg) == SYMQFI_OK);
    CHECK(symqfi_config_validate(cfg) == SYMQFI_ERR_CONFIG);
    CHECK(std::string(symqfi_last_error_key()) == "k_list[0]");
    symqfi_campaign *c = nullptr;
    CHECK(symqfi_sampling_campaign(cfg, 1, &c) == SYMQFI_ERR_CONFIG);
    CHECK(c == nullptr);
    symqfi_config_free(cfg);

    cfg = small_config(1);
    CHECK(symqfi_config_validate(cfg) == SYMQFI_OK);
    CHECK(symqfi_config_set_generator(cfg, "rotating") == SYMQFI_OK);
    CHECK(symqfi_config_set_theta_random(cfg) == SYMQFI_OK);
    char *json = nullptr;
    REQUIRE(symqfi_config_to_json(cfg, &json) == SYMQFI_OK);
    const std::string text = take(json);
    CHECK(text.find("\"random\"") != std::string::npos);
    symqfi_config *back = nullptr;
    REQUIRE(symqfi_config_from_json(text.c_str(), &back) == SYMQFI_OK);
    REQUIRE(symqfi_config_to_json(back, &json) == SYMQFI_OK);
    CHECK(take(json) == text);
    symqfi_config_free(back);
    symqfi_config_free(cfg);
}

TEST_CASE("sampling campaign through the C interface") {
    symqfi_config *cfg = small_config(99);
    symqfi_campaign *one = nullptr, *three = nullptr;
    REQUIRE(symqfi_sampling_campaign(cfg, 1, &one) == SYMQFI_OK);
    REQUIRE(symqfi_sampling_campaign(cfg, 3, &three) == SYMQFI_OK);
    CHECK(symqfi_campaign_record_count(one) == 40);
    CHECK(symqfi_campaign_summary_count(one) == 4);

    int n = 0, k = 0;
    double mean = 0, sem = 0;
    int64_t kept = 0, degenerate = 0;
    REQUIRE(symqfi_campaign_summary(one, 3, 1, &n, &k, &mean, &sem, &kept, &degenerate) == SYMQFI_OK);
    CHECK(n == 6);
    CHECK(k == 3);
    CHECK(kept + degenerate == 10);
    CHECK(std::string(symqfi_campaign_warning(one, 0)).empty());
    CHECK(symqfi_campaign_summary(one, 4, 0, &n, &k, &mean, &sem, &kept, &degenerate) == SYMQFI_ERR_INVALID_ARGUMENT);

    const fs::path dir = scratch_dir("campaign");
    REQUIRE(symqfi_campaign_write_records(one, (dir / "a.csv").c_str()) == SYMQFI_OK);
    REQUIRE(symqfi_campaign_write_records(three, (dir / "b.csv").c_str()) == SYMQFI_OK);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    REQUIRE(symqfi_campaign_write_summary(one, 0, (dir / "s.csv").c_str()) == SYMQFI_OK);
    REQUIRE(symqfi_campaign_write_histogram(one, (dir / "h.csv").c_str()) == SYMQFI_OK);
    CHECK(slurp(dir / "s.csv").rfind("N,k,mean_qfi", 0) == 0);
    CHECK(symqfi_campaign_write_records(one, (dir / "nope" / "x.csv").c_str()) == SYMQFI_ERR_IO);

    symqfi_campaign_free(one);
    symqfi_campaign_free(three);
    symqfi_config_free(cfg);
}

TEST_CASE("gap scan, Haar sets and optimization") {
    symqfi_config *cfg = nullptr;
    REQUIRE(symqfi_config_from_json("{\"N_list\":[10],\"k_list\":[2],\"samples\":50,\"master_seed\":3}", &cfg) ==
            SYMQFI_OK);
    symqfi_gap_scan *scan = nullptr;
    REQUIRE(symqfi_gap_scan_run(cfg, 2, &scan) == SYMQFI_OK);
    int64_t checked = 0, violations = 0;
    double excess = 0.0;
    REQUIRE(symqfi_gap_scan_violations(scan, 0, &checked, &violations, &excess) == SYMQFI_OK);
    CHECK(checked == 50);
    CHECK(violations == 0);
    CHECK(symqfi_gap_scan_violations(scan, 2, &checked, &violations, &excess) == SYMQFI_ERR_INVALID_ARGUMENT);
    char *json = nullptr;
    REQUIRE(symqfi_gap_scan_report_json(scan, &json) == SYMQFI_OK);
    CHECK(take(json).find("lmg_control") != std::string::npos);
    symqfi_gap_scan_free(scan);
    symqfi_config_free(cfg);

    symqfi_haar_set *h = nullptr;
    REQUIRE(symqfi_haar_minimal_set(4, &h) == SYMQFI_OK);
    CHECK(symqfi_haar_set_size(h) == 25);
    CHECK(symqfi_haar_set_final_rank(h) == 25);
    int a = 0, b = 0, c = 0;
    REQUIRE(symqfi_haar_set_index(h, 24, &a, &b, &c) == SYMQFI_OK);
    CHECK((a == 1 && b == 3 && c == 0));
    CHECK(symqfi_haar_set_index(h, 25, &a, &b, &c) == SYMQFI_ERR_INVALID_ARGUMENT);
    symqfi_haar_set_free(h);

    symqfi_optimum *o = nullptr;
    REQUIRE(symqfi_optimize(4, 2, "linear-phase", 0.0, 2, 200, 5, 1e-8, 1, &o) == SYMQFI_OK);
    CHECK(symqfi_optimum_best_qfi(o) >= 12.0 - 1e-6);
    CHECK(symqfi_optimum_upper_bound(o) == doctest::Approx(16.0));
    REQUIRE(symqfi_optimum_to_json(o, &json) == SYMQFI_OK);
    CHECK(take(json).find("best_spec") != std::string::npos);
    symqfi_optimum_free(o);
    CHECK(symqfi_optimize(4, 5, "linear-phase", 0.0, 2, 200, 5, 1e-8, 1, &o) == SYMQFI_ERR_INVALID_ARGUMENT);
}

TEST_CASE("null handles are rejected, free accepts null") {
    double v = 0.0;
    CHECK(symqfi_qfi(nullptr, "rotating", 0.0, SYMQFI_ROUTE_SYMMETRIC, &v) == SYMQFI_ERR_INVALID_ARGUMENT);
    CHECK(symqfi_config_validate(nullptr) == SYMQFI_ERR_INVALID_ARGUMENT);
    symqfi_operator_free(nullptr);
    symqfi_state_free(nullptr);
    symqfi_config_free(nullptr);
    symqfi_campaign_free(nullptr);
    symqfi_gap_scan_free(nullptr);
    symqfi_haar_set_free(nullptr);
    symqfi_optimum_free(nullptr);
    symqfi_string_free(nullptr);
}
