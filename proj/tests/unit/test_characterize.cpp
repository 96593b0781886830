#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracle_tables.hpp"
#include "turan/characterize.hpp"
#include "turan/errors.hpp"

using namespace turan;

namespace
{
//! Cells pinned far from failure except those listed as metastable.
SramBlock quiet_block(SramGeometry geo, std::vector<std::pair<std::size_t, double>> fair = {})
{
    std::vector<CellParams> cells(geo.cell_count(), CellParams{0, 0, 2, 0});
    for (auto [index, q_target] : fair)
    {
        // a = 1 and q = q_target at 550 mV with the default q_gamma
        cells[index] = CellParams{900, 550 - (q_target - 0.5) / 0.22, 2, 0};
    }
    return SramBlock::from_cells(geo, FaultModelConfig{}, cells);
}

OperatingPoint const k550{550, 200, 45};
}  // namespace

TEST_CASE("binary entropy")
{
    CHECK(shannon_entropy(0.5) == 1.0);
    CHECK(shannon_entropy(0.0) == 0.0);
    CHECK(shannon_entropy(1.0) == 0.0);
    CHECK(std::abs(shannon_entropy(0.25) - 0.811278) < 1e-6);
    for (auto const& [p, h] : oracle::kEntropy)
        CHECK(std::abs(shannon_entropy(p) - h) < 1e-12);
    CHECK_THROWS_AS(shannon_entropy(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(shannon_entropy(1.5), std::invalid_argument);
}

TEST_CASE("data patterns")
{
    DataPattern a5{PatternKind::A5};
    CHECK(a5.word_for_row(0) == 0xAAAA);
    CHECK(a5.word_for_row(1) == 0x5555);
    CHECK(DataPattern{PatternKind::C3}.word_for_row(3) == 0x3333);
    CHECK(DataPattern{PatternKind::Zero}.word_for_row(7) == 0x0000);
    CHECK(DataPattern::parse("0xFFFF").kind == PatternKind::F);
    CHECK(DataPattern::parse("a5").kind == PatternKind::A5);
    CHECK(DataPattern::parse("5").kind == PatternKind::Five);
    CHECK_THROWS_AS(DataPattern::parse("0x1234"), std::invalid_argument);
    for (auto p : DataPattern::all())
        CHECK(DataPattern::parse(p.label()) == p);
}

TEST_CASE("windows pair adjacent rows within a block")
{
    auto w = entropy_windows(SramGeometry{5, 16, 2});
    REQUIRE(w.size() == 6);
    CHECK(w[0].first_row == 0);
    CHECK(w[2].first_row == 4);
    CHECK(w[2].row_count == 1);
    CHECK(w[3].first_row == 5);
    CHECK(w[3].row_count == 2);
    CHECK(w[5].first_row == 9);
}

TEST_CASE("characterize_rows on quiet and metastable cells")
{
    SramGeometry geo{4, 16, 1};
    auto block = quiet_block(geo);
    RandomStream stream{1};
    auto rec = characterize_rows(block, k550, DataPattern{}, 200, stream);
    for (double h : rec.cell_entropy)
        CHECK(h == 0.0);
    CHECK(rec.max_block32() == 0.0);

    auto one = quiet_block(geo, {{16 + 5, 0.5}});
    RandomStream s2{2};
    auto rec2 = characterize_rows(one, k550, DataPattern{}, 1000, s2);
    double const h = rec2.cell_entropy[16 + 5];
    CHECK(std::abs(h - 1.0) <= 0.01);
    CHECK(rec2.row_entropy[1] == h);
    CHECK(rec2.row_entropy[0] == 0.0);
    CHECK(rec2.block32_entropy[0] == h);
    CHECK(rec2.ones_count[16 + 5] > 400);

    CHECK_THROWS_AS(characterize_rows(one, k550, DataPattern{}, 0, s2),
                    std::invalid_argument);
}

TEST_CASE("row entropy is the exact sum of its cells")
{
    SramBlock block{4, SramGeometry{16, 16, 1}, FaultModelConfig{}};
    RandomStream stream{8};
    auto rec = characterize_rows(block, k550, DataPattern{}, 100, stream);
    for (std::size_t r = 0; r < 16; ++r)
    {
        double sum = 0;
        for (std::size_t c = 0; c < 16; ++c)
            sum += rec.cell_entropy[r * 16 + c];
        CHECK(rec.row_entropy[r] == sum);
    }
}

TEST_CASE("estimator converges to the analytic entropy")
{
    SramGeometry geo{1, 16, 1};
    auto block = quiet_block(geo, {{0, 0.5}, {1, 0.25}, {2, 0.1}});
    RandomStream stream{77};
    auto rec = characterize_rows(block, k550, DataPattern{}, 100000, stream);
    CHECK(std::abs(rec.cell_entropy[0] - shannon_entropy(0.5)) < 0.005);
    CHECK(std::abs(rec.cell_entropy[1] - shannon_entropy(0.25)) < 0.005);
    CHECK(std::abs(rec.cell_entropy[2] - shannon_entropy(0.1)) < 0.005);
}

TEST_CASE("sweep is independent of thread count")
{
    std::vector<SramBlock> blocks{SramBlock{3, SramGeometry{32, 16, 1}, {}},
                                  SramBlock{4, SramGeometry{32, 16, 1}, {}}};
    SweepConfig cfg = SweepConfig::defaults();
    cfg.reads_per_row = 100;
    cfg.patterns = {DataPattern{PatternKind::F}, DataPattern{PatternKind::A}};
    RandomStream stream{5};
    auto a = sweep(blocks, cfg, stream, 1);
    auto b = sweep(blocks, cfg, stream, 3);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
    {
        CHECK(a.points[i].max_block32 == b.points[i].max_block32);
        CHECK(a.points[i].avg_block32 == b.points[i].avg_block32);
    }
    CHECK(a.best_point == b.best_point);
    CHECK(a.max_block32_entropy >= a.avg_block32_entropy);
    CHECK(a.points.size() == 20);
}

TEST_CASE("nominal sweep has no entropy source")
{
    std::vector<SramBlock> blocks{SramBlock{3, SramGeometry{32, 16, 1}, {}}};
    SweepConfig cfg = SweepConfig::defaults();
    cfg.voltages = {1000};
    cfg.reads_per_row = 50;
    auto rep = sweep(blocks, cfg, RandomStream{1}, 1);
    CHECK(rep.max_block32_entropy == 0.0);
    CHECK(rep.avg_block32_entropy == 0.0);
    CHECK_THROWS_AS(select_entropy_source(rep), NoEntropySource);

    SweepConfig empty = cfg;
    empty.voltages.clear();
    CHECK_THROWS_AS(sweep(blocks, empty, RandomStream{1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sweep({}, cfg, RandomStream{1}, 1), std::invalid_argument);
}

TEST_CASE("source selection and tie-break")
{
    CharacterizationReport rep;
    SweepPoint p;
    p.pattern = DataPattern{PatternKind::F};
    p.op = {560, 200, 45};
    p.max_block32 = 6.0;
    p.best_block = 1;
    p.best_window = {10, 2};
    rep.points.push_back(p);

    p.op = {555, 200, 45};
    p.best_block = 0;
    p.best_window = {40, 2};
    rep.points.push_back(p);

    p.op = {550, 200, 45};
    p.max_block32 = 9.0;
    p.pattern = DataPattern{PatternKind::A};
    rep.points.push_back(p);

    auto src = select_entropy_source(rep);
    CHECK(src.block == 0);
    CHECK(src.first_row == 40);
    CHECK(src.op.voltage_mv == 555.0);
    CHECK(src.entropy_per_read == 6.0);
    CHECK(src.row_count == 2);

    rep.points[0].max_block32 = 7.0;
    CHECK(select_entropy_source(rep).op.voltage_mv == 560.0);
}

TEST_CASE("voltage range and expected entropy")
{
    auto v = SweepConfig::voltage_range(535, 580, 5);
    REQUIRE(v.size() == 10);
    CHECK(v.front() == 535.0);
    CHECK(v.back() == 580.0);
    CHECK_THROWS_AS(SweepConfig::voltage_range(535, 580, 0), std::invalid_argument);

    SramBlock block{1, SramGeometry{64, 16, 1}, {}};
    CHECK(expected_entropy(block, {1000, 200, 45}, DataPattern{}).max_block32() == 0.0);
    CHECK(expected_entropy(block, k550, DataPattern{}).max_block32() > 0.0);
}
