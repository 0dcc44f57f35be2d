#include "spdcm/spdcm.h"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

struct Model {
    spdcm_model* m = nullptr;
    explicit Model(const char* preset) { REQUIRE(spdcm_model_from_preset(preset, &m) == SPDCM_OK); }
    ~Model() { spdcm_model_free(m); }
    double get(const char* name) const {
        double v = 0;
        REQUIRE(spdcm_model_get(m, name, &v) == SPDCM_OK);
        return v;
    }
};

}  // namespace

TEST_CASE("status codes and last error") {
    spdcm_model* m = nullptr;
    CHECK(spdcm_model_from_preset("fig9", &m) == SPDCM_ERR_VALIDATION);
    CHECK(m == nullptr);
    CHECK(std::string(spdcm_last_error()).find("fig9") != std::string::npos);
    CHECK(spdcm_model_from_string("[pump]\nwaist = 3\n", &m) == SPDCM_ERR_PARSE);
    CHECK(spdcm_model_from_file("/nonexistent.toml", &m) != SPDCM_OK);
    CHECK(spdcm_model_from_preset(nullptr, &m) == SPDCM_ERR_ARGUMENT);
    CHECK(std::string(spdcm_status_string(SPDCM_ERR_IO)) == "i/o error");
    double v = 0;
    CHECK(spdcm_efficiency(1.0, -1.0, &v) == SPDCM_ERR_DOMAIN);
    CHECK(spdcm_efficiency(1.0, 0.4, &v) == SPDCM_OK);
    CHECK(std::string(spdcm_last_error()).empty());
}

TEST_CASE("model parameters") {
    Model m("fig5");
    CHECK(m.get("photons") == doctest::Approx(4.0));
    CHECK(m.get("R") == doctest::Approx(6.3661977236758134e-5));
    CHECK(m.get("a_peak") < 0);
    CHECK(spdcm_model_set(m.m, "photons", 9.0) == SPDCM_OK);
    CHECK(m.get("photons") == doctest::Approx(9.0));
    CHECK(spdcm_model_set(m.m, "photons", -1.0) == SPDCM_ERR_VALIDATION);
    CHECK(m.get("photons") == doctest::Approx(9.0));
    CHECK(spdcm_model_set(m.m, "R", 1.0) == SPDCM_ERR_ARGUMENT);
    double v = 0;
    CHECK(spdcm_model_get(m.m, "nonsense", &v) == SPDCM_ERR_ARGUMENT);

    Model flat("fig4");
    CHECK(spdcm_model_get(flat.m, "X_peak", &v) == SPDCM_ERR_DOMAIN);
}

TEST_CASE("intensities and orders") {
    Model m("fig5");
    spdcm_components c{};
    REQUIRE(spdcm_intensity(m.m, -1.75e-3, 0, &c) == SPDCM_OK);
    CHECK(c.total == doctest::Approx(c.stimulated + c.background));
    CHECK(c.idler > c.background);

    Model o("fig2");
    spdcm_order_info info{};
    REQUIRE(spdcm_order_info_get(o.m, 1, &info) == SPDCM_OK);
    CHECK(info.idler == 1);
    CHECK(info.center_x == doctest::Approx(-0.3e-3));
    double v = 0;
    CHECK(spdcm_order_intensity(o.m, 1, -0.3e-3, 0, &v) == SPDCM_OK);
    CHECK(v > 0);
    CHECK(spdcm_order_intensity(o.m, -1, 0, 0, &v) == SPDCM_ERR_ARGUMENT);
}

TEST_CASE("images and fitting through the C interface") {
    Model m("fig5");
    spdcm_image* img = nullptr;
    REQUIRE(spdcm_image_synthesize(m.m, 0, 0, &img) == SPDCM_OK);
    spdcm_image_info info{};
    REQUIRE(spdcm_image_info_get(img, &info) == SPDCM_OK);
    CHECK(info.nx == 101);
    CHECK(info.ny == 13);
    std::vector<double> vals(info.nx * info.ny);
    CHECK(spdcm_image_values(img, vals.data(), vals.size() - 1) == SPDCM_ERR_ARGUMENT);
    CHECK(spdcm_image_values(img, vals.data(), vals.size()) == SPDCM_OK);

    std::string path = "capi_image.csv";
    REQUIRE(spdcm_image_write(img, path.c_str()) == SPDCM_OK);
    spdcm_image* back = nullptr;
    REQUIRE(spdcm_image_read(path.c_str(), &back) == SPDCM_OK);

    const double init[] = {2.0, 0.5};
    spdcm_fit_result r{};
    REQUIRE(spdcm_fit(m.m, back, "photons, squeezing", init, &r) == SPDCM_OK);
    CHECK(r.count == 2);
    CHECK(std::string(r.names[0]) == "photons");
    CHECK(r.values[0] == doctest::Approx(4.0).epsilon(1e-4));
    CHECK(r.values[1] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(spdcm_fit(m.m, back, "photons,bogus", nullptr, &r) == SPDCM_ERR_VALIDATION);
    spdcm_image_free(back);
    spdcm_image_free(img);
}

TEST_CASE("tables and plots") {
    const char* cols[] = {"a", "b"};
    const double data[] = {1, 2, 3, 4};
    CHECK(spdcm_write_table("capi_table.csv", cols, 2, data, 2) == SPDCM_OK);
    CHECK(spdcm_write_table("capi_table.csv", cols, 2, data, 0) == SPDCM_ERR_ARGUMENT);
    CHECK(spdcm_write_table("/proc/spdcm/x.csv", cols, 2, data, 2) == SPDCM_ERR_IO);
    double xs[] = {0, 1, 2}, ys[] = {1, 0, 1};
    spdcm_series s{"curve", xs, ys, 3};
    CHECK(spdcm_write_plot("capi_plot.svg", "t", nullptr, nullptr, &s, 1) == SPDCM_OK);
    CHECK(spdcm_write_plot("capi_plot.svg", "t", nullptr, nullptr, &s, 0) == SPDCM_ERR_ARGUMENT);
}
