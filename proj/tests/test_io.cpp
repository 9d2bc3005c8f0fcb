#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "lfd/config.hpp"
#include "lfd/errors.hpp"
#include "lfd/io.hpp"

using namespace lfd;

namespace {

struct EnvGuard {
    std::string key;
    EnvGuard(const std::string& k, const std::string& v) : key(k) {
        setenv(key.c_str(), v.c_str(), 1);
    }
    ~EnvGuard() { unsetenv(key.c_str()); }
};

Distribution random_distribution(double R, int n, double eps,
                                 std::uint64_t seed) {
    Distribution f(build_grid(R, n), eps);
    std::mt19937_64 eng(seed);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return f;
}

} // namespace

TEST_CASE("parse_config: minimal file gives documented defaults") {
    const SimulationConfig c = parse_config("gamma = -1\n");
    CHECK(c.gamma == -1.0);
    CHECK(c.epsilon == 0.0);
    CHECK(c.R == 6.0);
    CHECK(c.N == 25);
    REQUIRE(c.nu.has_value());
    CHECK(*c.nu == 0.5);  // auto = h = 2R/(N-1)
    CHECK(c.cfl == 0.4);
    CHECK(c.scheme == Scheme::rk2);
    CHECK(c.t_final == 1.0);
    CHECK(c.initial.kind == InitialConditionSpec::Kind::equilibrium);
    CHECK(c.clipping == false);
    CHECK(c.backend == ConvBackend::fft);
    CHECK(c.collisions == true);
    CHECK(c.pair_diagnostics == true);
    CHECK(c.trials == 100);
}

TEST_CASE("parse_config: sections, comments, and every key") {
    const std::string text =
        "# full configuration\n"
        "gamma = -1.5   ; inline comment\n"
        "epsilon = 0.05\n"
        "\n"
        "[grid]\n"
        "R = 5\n"
        "N = 17\n"
        "\n"
        "[run]\n"
        "nu = 0.25\n"
        "cfl = 0.3\n"
        "scheme = euler\n"
        "t_final = 2.5\n"
        "diag_cadence = 7\n"
        "snapshot_cadence = 50\n"
        "clipping = on\n"
        "backend = direct\n"
        "threads = 2\n"
        "collisions = off\n"
        "pair_diagnostics = off\n"
        "\n"
        "[diagnostics]\n"
        "s_list = 0, 2\n"
        "eta_list = 1\n"
        "p_list = 2, 3\n"
        "exp_a = 0.1\n"
        "exp_q = 0.5\n"
        "\n"
        "[initial]\n"
        "initial = two-bump\n"
        "separation = 1.5\n"
        "width = 0.6\n"
        "rho = 1.2\n"
        "theta = 0.9\n"
        "ux = 0.1\n"
        "uy = -0.2\n"
        "uz = 0.3\n"
        "\n"
        "out = results\n"
        "seed = 31\n"
        "trials = 10\n";
    const SimulationConfig c = parse_config(text);
    CHECK(c.gamma == -1.5);
    CHECK(c.epsilon == 0.05);
    CHECK(c.R == 5.0);
    CHECK(c.N == 17);
    CHECK(*c.nu == 0.25);
    CHECK(c.cfl == 0.3);
    CHECK(c.scheme == Scheme::euler);
    CHECK(c.t_final == 2.5);
    CHECK(c.diag_cadence == 7);
    CHECK(c.snapshot_cadence == 50);
    CHECK(c.clipping == true);
    CHECK(c.backend == ConvBackend::direct);
    CHECK(c.threads == 2);
    CHECK(c.collisions == false);
    CHECK(c.pair_diagnostics == false);
    CHECK(c.s_list == std::vector<double>{0, 2});
    CHECK(c.eta_list == std::vector<double>{1});
    CHECK(c.p_list == std::vector<double>{2, 3});
    REQUIRE(c.exp_aq.has_value());
    CHECK(c.exp_aq->first == 0.1);
    CHECK(c.exp_aq->second == 0.5);
    CHECK(c.initial.kind == InitialConditionSpec::Kind::two_bump);
    CHECK(c.initial.separation == 1.5);
    CHECK(c.initial.width == 0.6);
    CHECK(c.initial.rho == 1.2);
    CHECK(c.initial.theta == 0.9);
    CHECK(c.initial.u[0] == 0.1);
    CHECK(c.initial.u[1] == -0.2);
    CHECK(c.initial.u[2] == 0.3);
    CHECK(c.out_dir == "results");
    CHECK(c.seed == 31);
    CHECK(c.trials == 10);
}

TEST_CASE("parse_config: validation failures carry the offending key") {
    auto key_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ValidationError& e) {
            return e.key;
        }
        return std::string("<no throw>");
    };
    CHECK(key_of("N = 17\n") == "gamma");          // gamma is required
    CHECK(key_of("gamma = -2.5\n") == "gamma");    // out of (-2, 0)
    CHECK(key_of("gamma = 0\n") == "gamma");
    CHECK(key_of("gamma = -2\n") == "gamma");
    CHECK(key_of("gamma = -1\nepsilon = -0.1\n") == "epsilon");
    CHECK(key_of("gamma = -1\nepsilon = 50\n") == "epsilon");  // >= eps_sat
    CHECK(key_of("gamma = -1\nN = 7\n") == "N");
    CHECK(key_of("gamma = -1\nR = 0\n") == "R");
    CHECK(key_of("gamma = -1\ncfl = 1.5\n") == "cfl");
    CHECK(key_of("gamma = -1\nnu = 0\n") == "nu");
    CHECK(key_of("gamma = -1\nnu = 2\n") == "nu");
    CHECK(key_of("gamma = -1\nN = 9\n") == "nu");  // auto nu with h > 1
    CHECK(key_of("gamma = -1\nexp_a = 0.1\n") == "exp_a");  // needs exp_q
    CHECK(key_of("gamma = -1\nexp_a = 0.1\nexp_q = 1.5\n") == "exp_q");
    CHECK(key_of("gamma = -1\ninitial = saturated\n") == "initial");
    CHECK(key_of("gamma = -1\ninitial = from-checkpoint\n") == "checkpoint");
    CHECK(key_of("gamma = -1\nbogus = 1\n") == "bogus");
    // sectioned unknown keys report the full path
    CHECK(key_of("gamma = -1\n[grid]\nbogus = 1\n") == "grid.bogus");
    CHECK(key_of("gamma = -1\nN = twelve\n") == "N");
    CHECK(key_of("gamma = -1\nN = 17.5\n") == "N");
    CHECK(key_of("gamma = -1\nclipping = maybe\n") == "clipping");
    CHECK(key_of("gamma = -1\nscheme = rk4\n") == "scheme");
    CHECK(key_of("gamma = -1\nbackend = gpu\n") == "backend");
}

TEST_CASE("parse_config: malformed lines raise ParseError") {
    CHECK_THROWS_AS(parse_config("gamma -1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[grid\ngamma = -1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("= -1\n"), ParseError);
}

TEST_CASE("apply_env_overrides: LFD_ variables win over file values") {
    SimulationConfig c = parse_config("gamma = -1\nN = 25\n");
    {
        EnvGuard a("LFD_N", "17");
        EnvGuard b("LFD_NU", "0.25");
        EnvGuard d("LFD_SCHEME", "euler");
        EnvGuard e("LFD_SEED", "77");
        apply_env_overrides(c);
    }
    CHECK(c.N == 17);
    CHECK(*c.nu == 0.25);
    CHECK(c.scheme == Scheme::euler);
    CHECK(c.seed == 77);
    CHECK(c.gamma == -1.0);  // untouched keys survive

    // overrides are validated like file values
    SimulationConfig c2 = parse_config("gamma = -1\n");
    EnvGuard g("LFD_GAMMA", "-3");
    CHECK_THROWS_AS(apply_env_overrides(c2), ValidationError);
}

TEST_CASE("checkpoint: bit-exact roundtrip") {
    const std::string path = "io_test_roundtrip.lfd";
    const Distribution f = random_distribution(6.0, 9, 0.2, 2024);
    write_checkpoint(f, -1.25, 0.75, path);
    const Checkpoint cp = read_checkpoint(path);
    CHECK(cp.f.grid().n() == 9);
    CHECK(cp.f.grid().extent() == 6.0);
    CHECK(cp.f.epsilon == 0.2);
    CHECK(cp.gamma == -1.25);
    CHECK(cp.t == 0.75);
    REQUIRE(cp.f.size() == f.size());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(cp.f[i] == f[i]);

    // the file is header + raw payload, nothing else
    CHECK(std::filesystem::file_size(path) ==
          64 + f.size() * sizeof(double));
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint: corruption is detected") {
    const std::string path = "io_test_corrupt.lfd";
    const Distribution f = random_distribution(6.0, 9, 0.0, 7);
    write_checkpoint(f, -1.0, 0.0, path);

    // truncated payload
    std::filesystem::resize_file(path, 64 + 100);
    CHECK_THROWS_AS(read_checkpoint(path), CheckpointCorrupt);

    // truncated header
    std::filesystem::resize_file(path, 10);
    CHECK_THROWS_AS(read_checkpoint(path), CheckpointCorrupt);

    // wrong magic
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        std::string junk(64 + 80, 'x');
        out.write(junk.data(), static_cast<std::streamsize>(junk.size()));
    }
    CHECK_THROWS_AS(read_checkpoint(path), CheckpointCorrupt);

    CHECK_THROWS_AS(read_checkpoint("io_test_missing.lfd"), CheckpointCorrupt);
    std::filesystem::remove(path);
}

TEST_CASE("initial_condition: from-checkpoint honors the configured epsilon") {
    const std::string path = "io_test_epsmismatch.lfd";
    const VelocityGrid g = build_grid(6.0, 9);
    const Distribution f = random_distribution(6.0, 9, 0.1, 5);
    write_checkpoint(f, -1.0, 0.0, path);

    InitialConditionSpec spec;
    spec.kind = InitialConditionSpec::Kind::from_checkpoint;
    spec.checkpoint_path = path;

    // mismatching epsilon: configured value wins, node values unchanged
    const Distribution loaded = initial_condition(spec, g, 0.2);
    CHECK(loaded.epsilon == 0.2);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(loaded[i] == f[i]);

    // mismatching grid is an error
    const VelocityGrid other = build_grid(6.0, 13);
    CHECK_THROWS_AS(initial_condition(spec, other, 0.1), ValidationError);
    std::filesystem::remove(path);
}

TEST_CASE("initial_condition: two-bump hits the target moments") {
    const VelocityGrid g = build_grid(6.0, 17);
    InitialConditionSpec spec;
    spec.kind = InitialConditionSpec::Kind::two_bump;
    spec.separation = 2.0;
    spec.width = 0.7;
    const Distribution f = initial_condition(spec, g, 0.05);

    double mass = 0.0, energy = 0.0;
    Vec3 mom{0, 0, 0};
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        auto [i, j, k] = g.unpack(idx);
        const double w = g.weight(i, j, k) * f[idx];
        mass += w;
        const Vec3 v = g.node(idx);
        for (int d = 0; d < 3; ++d) mom[d] += w * v[d];
        energy += w * norm2(v);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(energy == doctest::Approx(3.0).epsilon(1e-10));
    for (int d = 0; d < 3; ++d) CHECK(std::abs(mom[d]) < 1e-12);
}

TEST_CASE("format_double and write_csv: lossless 17-digit decimals") {
    for (double x : {1.0 / 3.0, -0.1, 1e-301, 6.02214076e23, 0.0}) {
        CHECK(std::stod(format_double(x)) == x);
    }
    const std::string path = "io_test_table.csv";
    write_csv(path, {"t", "mass"}, {{0.0, 1.0}, {0.125, 1.0 / 3.0}});
    const std::string body = read_text_file(path);
    CHECK(body ==
          "t,mass\n"
          "0,1\n"
          "0.125,0.33333333333333331\n");
    CHECK_THROWS_AS(write_csv(path, {"a", "b"}, {{1.0}}), ConfigurationError);
    std::filesystem::remove(path);
}
