#include <doctest.h>

#include "fixtures.hpp"
#include "ldrw/io.hpp"

using namespace ldrw;
using ldrw::testing::srw1;

TEST_CASE("measure json round trip at full precision") {
    std::map<LatticePoint, double> e;
    e[{0}] = 0.1 + 0.2;  // not exactly representable; must survive the trip
    e[{-3}] = 1.0 / 3.0;
    e[{7}] = 5e-13;
    SparseMeasure mu(1, e);

    nlohmann::json j = nlohmann::json::parse(to_json(mu).dump());
    CHECK(measure_from_json(j) == mu);

    CHECK_THROWS(measure_from_json(nlohmann::json{{"dim", 0}, {"entries", nlohmann::json::array()}}));
    nlohmann::json dup{{"dim", 1},
                       {"entries", {{{0}, 0.25}, {{0}, 0.25}}}};
    CHECK_THROWS(measure_from_json(dup));
}

TEST_CASE("compact point json round trip") {
    std::map<LatticePoint, double> e;
    e[{2}] = 0.25;
    e[{4}] = 0.25;
    CompactPoint xi(1, {Orbit(SparseMeasure(1, e)), Orbit(point_mass({9}, 0.5))});
    nlohmann::json j = nlohmann::json::parse(to_json(xi).dump());
    CHECK(compact_point_from_json(j) == xi);
}

TEST_CASE("kernel json round trip and symmetry completion") {
    RateKernel k = srw1();
    nlohmann::json j = nlohmann::json::parse(to_json(k).dump());
    RateKernel back = kernel_from_json(j);
    CHECK(back.jumps() == k.jumps());

    nlohmann::json half{{"dim", 1}, {"jumps", {{{1}, 0.5}}}};
    CHECK(kernel_from_json(half).rate({-1}) == 0.5);

    nlohmann::json bad{{"dim", 1}, {"jumps", {{{1}, 0.5}, {{-1}, 0.75}}}};
    CHECK_THROWS(kernel_from_json(bad));
}

TEST_CASE("potential and trajectory round trips") {
    SiteFunction vm;
    vm[{0}] = 4.0;
    vm[{1}] = 1.5;
    DifferencePotential v(1, vm);
    nlohmann::json j = nlohmann::json::parse(to_json(v).dump());
    DifferencePotential back = potential_from_json(j);
    CHECK(back.values() == v.values());

    RateKernel k = srw1();
    Trajectory traj = simulate(k, 5.0, {0}, 314);
    Trajectory rt = trajectory_from_json(nlohmann::json::parse(to_json(traj).dump()));
    CHECK(rt == traj);
}
