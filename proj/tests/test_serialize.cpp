#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "viscowave/viscowave.hpp"

using namespace viscowave;

TEST(Json, MeasureRoundTrip) {
    RadonMeasure m({{0.5, 2.0}, {3.0, 1.0}},
                   {PowerDensity{1.5, -1.5, 0.0, kInf}, ExpDensity{{{1.0, 2.0}, {0.5, 7.0}}},
                    TableDensity{{1.0, 2.0, 4.0}, {0.0, 1.0, 0.5}}});
    const Json j = to_json(m);
    EXPECT_TRUE(j["density"][0]["hi"].is_null());
    const RadonMeasure back = measure_from_json(Json::parse(j.dump()));
    EXPECT_EQ(to_json(back).dump(), j.dump());
    for (double r : {0.3, 1.0, 2.5, 10.0}) EXPECT_EQ(tail_mass(back, r), tail_mass(m, r));
}

TEST(Json, SingleDensityObjectAccepted) {
    auto m = measure_from_json(Json::parse(R"({"density": {"kind": "exp", "terms": [[1, 1]]}})"));
    EXPECT_NEAR(tail_mass(m, 2.0), std::exp(-2.0), 1e-15);
}

TEST(Json, CrfRoundTrip) {
    CrfRepr j{0.5, 0.25,
              {PowerKernel{1.0, 0.3}, ExpSumKernel{{{1, 2}}}, TableKernel{{0.0, 1.0}, {2.0, 0.5}},
               TailKernel{RadonMeasure({{2.0, 1.0}})}}};
    const Json enc = to_json(j);
    const CrfRepr back = crf_from_json(enc);
    EXPECT_EQ(to_json(back).dump(), enc.dump());
    for (double t : {0.0, 0.5, 3.0}) EXPECT_EQ(eval_crf(back, t), eval_crf(j, t));
}

TEST(Json, MaterialFromBernstein) {
    auto m = material_from_json(
        Json::parse(R"({"rho": 2, "bernstein": {"a": 0, "b": 0, "measure": {"atoms": [[1, 1]]}}})"));
    EXPECT_EQ(m.rho, 2.0);
    EXPECT_NEAR(eval_crf(m.creep, 0.5), 0.5, 1e-15);
    EXPECT_NEAR(eval_crf(m.creep, 5.0), 1.0, 1e-15);
}

TEST(Json, SchemaErrors) {
    EXPECT_THROW(measure_from_json(Json::parse(R"({"atoms": [[1]]})")), SchemaError);
    EXPECT_THROW(measure_from_json(Json::parse(R"({"density": {"kind": "gauss"}})")), SchemaError);
    EXPECT_THROW(kernel_from_json(Json::parse(R"({"kind": "power", "alpha": "x"})")), SchemaError);
    EXPECT_THROW(material_from_json(Json::parse(R"({"rho": 1})")), SchemaError);
    EXPECT_THROW(crf_from_json(Json::parse(R"({"a": 1, "kernel": [{"kind": "power", "alpha": 1.5}]})")),
                 InvalidKernelError);
    EXPECT_THROW(material_from_json(Json::parse(R"({"rho": -1, "creep": {"a": 1}})")), DomainError);
}

TEST(Json, VerdictShape) {
    auto v = check_bernstein_differences(creep_example(1.5), 8, linear_grid(0.01, 2.0, 200), 0.01);
    const Json j = to_json(v, "bernstein");
    EXPECT_EQ(j["class"], "bernstein");
    EXPECT_EQ(j["pass"], false);
    EXPECT_TRUE(j["witness"].is_number());
    EXPECT_TRUE(j["tolerances"].is_object());
}

TEST(Csv, HeaderAndRoundTrip) {
    AttenuationCurve c = curve(Material{{0.5, 1.0, {PowerKernel{1.0, 0.5}}}, 1.0}, log_grid(1e-2, 1e2, 17));
    std::ostringstream os;
    write_curve_csv(os, c);
    const std::string text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "omega,kappa_R,kappa_I,atten,phase_velocity");
    std::istringstream is(text);
    auto back = read_curve_csv(is);
    ASSERT_EQ(back.rows.size(), c.rows.size());
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        EXPECT_EQ(back.rows[i].omega, c.rows[i].omega);
        EXPECT_EQ(back.rows[i].kappa_I, c.rows[i].kappa_I);
        EXPECT_EQ(back.rows[i].phase_velocity, c.rows[i].phase_velocity);
    }
}

TEST(Csv, InfinitePhaseVelocityRoundTrips) {
    AttenuationCurve c;
    c.rows.push_back({1.0, 0.0, 0.0, 0.0, kInf});
    std::ostringstream os;
    write_curve_csv(os, c);
    std::istringstream is(os.str());
    EXPECT_EQ(read_curve_csv(is).rows[0].phase_velocity, kInf);
}

TEST(Csv, RejectsBadInput) {
    std::istringstream bad_header("w,k\n1,2\n");
    EXPECT_THROW(read_curve_csv(bad_header), SchemaError);
    std::istringstream short_row("omega,kappa_R,kappa_I,atten,phase_velocity\n1,2,3\n");
    EXPECT_THROW(read_curve_csv(short_row), SchemaError);
    std::istringstream junk("omega,kappa_R,kappa_I,atten,phase_velocity\n1,2,x,4,5\n");
    EXPECT_THROW(read_curve_csv(junk), SchemaError);
}
