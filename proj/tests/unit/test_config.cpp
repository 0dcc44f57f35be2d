#include "support.hpp"

#include "spdcm/error.hpp"

using namespace spdcm;
using spdcm::test::preset;
using spdcm::test::rel;

namespace {

const char* kMinimal = R"(
[pump]
degenerate_wavelength = "0.8 um"
bandwidth = "1e12 rad/s"
waist = "0.2 mm"
squeezing = 1.0

[seed]
photons = 4
waist = "0.2 mm"
bandwidth = "1e12 rad/s"

[crystal]
length = "3 mm"

[detector]
focal_length = "100 mm"
aperture = "4 mm"
bandwidth = "1e11 rad/s"
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    auto p = text.find(from);
    REQUIRE(p != std::string::npos);
    return text.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("minimal document with the combined-output values parses") {
    ExperimentConfig c = load_config(kMinimal);
    CHECK(c.crystal.length == doctest::Approx(3e-3));
    CHECK(c.pump.waist == doctest::Approx(0.2e-3));
    CHECK(c.seed.amplitude * c.seed.amplitude == doctest::Approx(4.0));
    CHECK(c.detector.focal_length == doctest::Approx(0.1));
    DerivedQuantities d = derive_quantities(c);
    CHECK(d.Xi == doctest::Approx(1.0));
    CHECK(d.omega_d == doctest::Approx(d.omega_p / 2));
}

TEST_CASE("zero pump waist is rejected") {
    CHECK_THROWS_AS(load_config(replace(kMinimal, "waist = \"0.2 mm\"", "waist = \"0 mm\"")), ValidationError);
}

TEST_CASE("a length without unit is a parse error") {
    CHECK_THROWS_AS(load_config(replace(kMinimal, "length = \"3 mm\"", "length = 3")), ParseError);
}

TEST_CASE("unknown keys and sections are reported") {
    CHECK_THROWS_AS(load_config(std::string(kMinimal) + "\n[crystal2]\nx = 1\n"), ParseError);
    CHECK_THROWS_AS(load_config(replace(kMinimal, "[crystal]", "[crystal]\nlenght = \"1 mm\"")), ParseError);
}

TEST_CASE("unit conversions") {
    CHECK(parse_quantity("3 mm", "length") == doctest::Approx(3e-3));
    CHECK(parse_quantity("800 nm", "length") == doctest::Approx(8e-7));
    CHECK(parse_quantity("1 deg", "angle") == doctest::Approx(kPi / 180));
    CHECK(parse_quantity("2 cm^2", "area") == doctest::Approx(2e-4));
    CHECK_THROWS(parse_quantity("3 kg", "length"));
}

TEST_CASE("derived constants of the background geometry") {
    ExperimentConfig c = preset("fig4");
    DerivedQuantities d = derive_quantities(c);
    CHECK(rel(d.k_d, 7853981.6339744831) < 1e-12);
    CHECK(rel(d.R, 6.3661977236758134e-5) < 1e-12);
    CHECK(rel(d.beta0, 9.5492965855137201e-3) < 1e-12);
    CHECK(d.r0 == 0.0);
    CHECK_FALSE(d.X_peak.has_value());

    c.crystal.pdc_angle = spdcm::test::deg(1);
    d = derive_quantities(c);
    CHECK(rel(d.r0, 1.7452406437283513e-3) < 1e-12);
    REQUIRE(d.X_peak.has_value());
    CHECK(rel(*d.X_peak, std::sqrt(d.r0 * d.r0 - 0.5 * d.R * d.R)) < 1e-12);
}

TEST_CASE("detector constant identity K_D w_D^2 = (2 pi)^4 sqrt(pi) delta_D") {
    for (const char* name : {"fig2", "fig4", "fig5"}) {
        ExperimentConfig c = preset(name);
        DerivedQuantities d = derive_quantities(c);
        double lhs = d.K_D * c.detector.aperture * c.detector.aperture;
        double rhs = std::pow(2 * kPi, 4) * std::sqrt(kPi) * c.detector.bandwidth;
        CHECK(rel(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("eta is one when pump and seed bandwidths agree") {
    DerivedQuantities d = derive_quantities(load_config(kMinimal));
    CHECK(d.eta == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("amplitude and squeezing are interconvertible through the cross-section") {
    std::string text = replace(kMinimal, "squeezing = 1.0", "amplitude = 3e6");
    text = replace(text, "length = \"3 mm\"", "length = \"3 mm\"\ncross_section = \"1e-14 m^2\"");
    ExperimentConfig c = load_config(text);
    DerivedQuantities d = derive_quantities(c);
    REQUIRE(d.zeta0.has_value());
    CHECK(rel(squeezing_from_amplitude(c, *d.zeta0), d.Xi) < 1e-12);
    CHECK(rel(amplitude_from_squeezing(c, d.Xi), *d.zeta0) < 1e-12);
}

TEST_CASE("G placement needs a real idler peak location") {
    ExperimentConfig c = preset("fig5");
    CHECK_NOTHROW(validate(c));
    c.crystal.pdc_angle = 0;
    CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("presets are known and unknown names fail") {
    for (const auto& n : preset_names()) CHECK_NOTHROW(preset(n));
    CHECK_THROWS_AS(preset_text("fig9"), ValidationError);
}
