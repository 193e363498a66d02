#include <doctest.h>

#include "polydeq/io.hpp"
#include "polydeq/verify.hpp"
#include "test_helpers.hpp"

using namespace polydeq;
using namespace polydeq::testing;

TEST_CASE("system JSON round trip is content-identical") {
    HomogeneousSystem sys(2, 4, Regime::Exact);
    sys.set_coefficient(0, MultiIndex({4, 0}),
                        Scalar::exact(Rational(1, 2), Rational(-3, 7)));
    sys.set_coefficient(0, MultiIndex({0, 4}), Scalar::exact(5L));
    sys.set_coefficient(1, MultiIndex({2, 2}), Scalar::exact(Rational(0), Rational(1)));

    const Json first = system_to_json(sys);
    const HomogeneousSystem loaded = system_from_json(first);
    const Json second = system_to_json(loaded);
    CHECK(first == second);
    CHECK(first.dump() == second.dump());

    // A float system round trips through JSON numbers.
    HomogeneousSystem fsys(2, 2, Regime::Float);
    fsys.set_coefficient(0, MultiIndex({2, 0}), Scalar::floating(0.1, -2.5e-17));
    const Json ffirst = system_to_json(fsys);
    CHECK(system_to_json(system_from_json(ffirst)) == ffirst);
}

TEST_CASE("system loader rejects malformed documents") {
    const Json good = system_to_json(n2m2_system());

    Json unknown_top = good;
    unknown_top["extra"] = 1;
    CHECK_THROWS_AS(system_from_json(unknown_top), ParseError);

    Json unknown_coeff = good;
    unknown_coeff["coefficients"][0]["note"] = "hi";
    CHECK_THROWS_AS(system_from_json(unknown_coeff), ParseError);

    Json duplicate = good;
    duplicate["coefficients"].push_back(duplicate["coefficients"][0]);
    CHECK_THROWS_AS(system_from_json(duplicate), ParseError);

    Json bad_regime = good;
    bad_regime["regime"] = "decimal";
    CHECK_THROWS_AS(system_from_json(bad_regime), ParseError);

    Json bad_equation = good;
    bad_equation["coefficients"][0]["equation"] = 3;
    CHECK_THROWS_AS(system_from_json(bad_equation), ParseError);

    // Exact documents carry parts as strings, not numbers.
    Json numeric_exact = good;
    numeric_exact["coefficients"][0]["re"] = 0.5;
    CHECK_THROWS_AS(system_from_json(numeric_exact), ParseError);

    Json string_float = good;
    string_float["regime"] = "float";
    CHECK_THROWS_AS(system_from_json(string_float), ParseError);

    Json missing = good;
    missing.erase("degree");
    CHECK_THROWS_AS(system_from_json(missing), ParseError);
}

TEST_CASE("scalar JSON typing follows the regime") {
    const Scalar exact = Scalar::exact(Rational(3, 4), Rational(-1, 2));
    const Json je = scalar_to_json(exact);
    CHECK(je["re"] == "3/4");
    CHECK(je["im"] == "-1/2");
    CHECK(scalar_from_json(je, Regime::Exact) == exact);

    const Scalar fl = Scalar::floating(0.25, -3.0);
    const Json jf = scalar_to_json(fl);
    CHECK(scalar_from_json(jf, Regime::Float) == fl);

    CHECK_THROWS_AS(scalar_from_json(je, Regime::Float), ParseError);
    CHECK_THROWS_AS(scalar_from_json(jf, Regime::Exact), ParseError);
}

TEST_CASE("instance bundle round trip") {
    const auto inst = random_solvable_instance(3, 3, 11, SolveMode::ZPivot, 0.6,
                                               Regime::Exact);
    const Json j = instance_to_json(inst);
    const SolvableInstance loaded = instance_from_json(j);
    CHECK(instance_to_json(loaded) == j);
    CHECK(loaded.Z == inst.Z);
    CHECK(loaded.certificate.mode == SolveMode::ZPivot);
    CHECK(loaded.certificate.max_residual == 0.0);

    Json tampered = j;
    tampered["certificate"]["proof"] = true;
    CHECK_THROWS_AS(instance_from_json(tampered), ParseError);
}

TEST_CASE("solve spec parsing") {
    Json j;
    j["mode"] = "coefficients";
    j["designated"] = Json::array({Json{{"equation", 1}, {"exponents", {2, 0}}},
                                   Json{{"equation", 2}, {"exponents", {0, 2}}}});
    j["guess"] = Json{{"Z", Json{{"re", "3"}, {"im", "0"}}},
                      {"ratios", Json::array({Json{{"re", "1"}, {"im", "0"}}})}};
    const SolveSpec spec = solve_spec_from_json(j, 2, Regime::Exact);
    CHECK(spec.mode == SolveMode::Coefficients);
    CHECK(spec.designated.at(0) == MultiIndex({2, 0}));
    CHECK(spec.designated.at(1) == MultiIndex({0, 2}));
    CHECK(*spec.Z == Scalar::exact(3L));
    CHECK(spec.free_ratios->size() == 1);
    CHECK(spec.tol == 1e-12);
    CHECK(spec.max_iter == 50);
    CHECK(spec.max_halvings == 30);

    // Newton guesses parse in the float regime even next to an exact system.
    Json jn;
    jn["mode"] = "newton";
    jn["guess"] = Json{{"Z", Json{{"re", 1.5}, {"im", 0.0}}},
                       {"ratios", Json::array({Json{{"re", 2.0}, {"im", 0.0}}})}};
    jn["tol"] = 1e-10;
    jn["max_iter"] = 12;
    const SolveSpec nspec = solve_spec_from_json(jn, 2, Regime::Exact);
    CHECK(nspec.Z->regime() == Regime::Float);
    CHECK(nspec.tol == 1e-10);
    CHECK(nspec.max_iter == 12);

    Json dup = j;
    dup["designated"][1]["equation"] = 1;
    CHECK_THROWS_AS(solve_spec_from_json(dup, 2, Regime::Exact), ParseError);

    Json bad_pivot;
    bad_pivot["mode"] = "z-pivot";
    bad_pivot["pivot_equation"] = 5;
    CHECK_THROWS_AS(solve_spec_from_json(bad_pivot, 2, Regime::Exact), ParseError);

    Json unknown = j;
    unknown["seed"] = 1;
    CHECK_THROWS_AS(solve_spec_from_json(unknown, 2, Regime::Exact), ParseError);

    Json wrong_count = j;
    wrong_count["guess"]["ratios"].push_back(Json{{"re", "1"}, {"im", "0"}});
    CHECK_THROWS_AS(solve_spec_from_json(wrong_count, 2, Regime::Exact),
                    ParseError);
}

TEST_CASE("solve spec round trip") {
    SolveSpec spec;
    spec.mode = SolveMode::ZPivot;
    spec.pivot_equation = 1;
    spec.designated[0] = MultiIndex({2, 2});
    spec.free_ratios = std::vector<Scalar>{Scalar::exact(Rational(2, 3))};
    const Json j = solve_spec_to_json(spec);
    const SolveSpec loaded = solve_spec_from_json(j, 2, Regime::Exact);
    CHECK(loaded.mode == SolveMode::ZPivot);
    CHECK(loaded.pivot_equation == 1);
    CHECK(loaded.designated.at(0) == MultiIndex({2, 2}));
    CHECK(solve_spec_to_json(loaded) == j);
}

TEST_CASE("trajectory CSV rendering") {
    const auto sys = n2m2_system();
    StateVector z0;
    z0.z = {Scalar::exact(Rational(1, 2)), Scalar::exact(1L)};
    const Trajectory traj = iterate(sys, z0, 1);

    const std::string decimal = trajectory_to_csv(traj);
    CHECK(decimal.rfind("step,re_z1,im_z1,re_z2,im_z2\n", 0) == 0);
    CHECK(decimal.find("\n0,0.5,0,1,0\n") != std::string::npos);
    // step 1: (1/4 + 1/2 + 1, 2*(1/4) + 1) = (7/4, 3/2)
    CHECK(decimal.find("\n1,1.75,0,1.5,0\n") != std::string::npos);

    const std::string rational =
        trajectory_to_csv(traj, CsvOptions{.digits = 17, .rational = true});
    CHECK(rational.find("\n0,1/2,0,1,0\n") != std::string::npos);
    CHECK(rational.find("\n1,7/4,0,3/2,0\n") != std::string::npos);

    Trajectory ftraj;
    StateVector fstate;
    fstate.z = {Scalar::floating(0.1, -2.0)};
    ftraj.states.push_back(fstate);
    const std::string fcsv = trajectory_to_csv(ftraj);
    CHECK(fcsv == "step,re_z1,im_z1\n0,0.1,-2\n");
}

TEST_CASE("read_json_file reports unreadable input") {
    CHECK_THROWS_AS(read_json_file("/nonexistent/path.json"), ParseError);
}
