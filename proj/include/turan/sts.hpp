#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bitstream.hpp"

namespace turan
{
//---------------------------------------------------------------------------//
// Statistical tests after NIST SP 800-22 (seven of the fifteen)
//---------------------------------------------------------------------------//

//! Whether to enforce the recommended input sizes or only what the math needs.
enum class LengthPolicy
{
    Recommended,
    Minimal
};

struct StsConfig
{
    double alpha = 0.01;
    std::size_t sequence_bits = std::size_t{1} << 20;
    std::size_t n_sequences = 1024;
    std::size_t block_m = 128;
    std::size_t serial_m = 16;
    std::size_t apen_m = 10;
    LengthPolicy policy = LengthPolicy::Recommended;

    void validate() const;
};

struct TestResult
{
    std::string test_name;
    double p_value = 0;
    bool pass = false;
    bool applicable = true; //!< false: input too short or gate failed; p = 0

    //! Re-evaluate pass against a significance level.
    TestResult& judge(double alpha);
};

double erfc(double x);
//! Regularized upper incomplete gamma Q(a, x).
double igamc(double a, double x);

using BitSpan = std::span<std::uint8_t const>;

TestResult monobit(BitSpan bits, double alpha = 0.01);
TestResult block_frequency(BitSpan bits, std::size_t m, double alpha = 0.01,
                           LengthPolicy policy = LengthPolicy::Recommended);
TestResult runs(BitSpan bits, double alpha = 0.01);
TestResult longest_run(BitSpan bits, double alpha = 0.01);
TestResult cumulative_sums(BitSpan bits, bool forward, double alpha = 0.01);
std::pair<TestResult, TestResult>
serial(BitSpan bits, std::size_t m, double alpha = 0.01,
       LengthPolicy policy = LengthPolicy::Recommended);
TestResult approximate_entropy(BitSpan bits, std::size_t m, double alpha = 0.01,
                               LengthPolicy policy = LengthPolicy::Recommended);

//! All tests on one sequence, in suite order (cusum and serial give two each).
std::vector<TestResult> run_all(BitSpan bits, StsConfig const& cfg);

//! Names in suite order.
std::vector<std::string> const& suite_test_names();

struct TestProportion
{
    std::string test_name;
    std::size_t passed = 0;
    double proportion = 0;
    bool pass = false;
};

struct SuiteReport
{
    double alpha = 0.01;
    std::size_t n_sequences = 0;
    std::size_t sequence_bits = 0;
    double bound = 0;
    std::vector<TestProportion> tests;
    std::vector<std::vector<TestResult>> sequences;
    bool verdict = false;
};

//! (1 - alpha) - 3 sqrt(alpha (1 - alpha) / k)
double proportion_bound(double alpha, std::size_t k);

SuiteReport run_suite(std::vector<Bits> const& streams, StsConfig const& cfg,
                      unsigned threads = 0);

//! Consecutive \p sequence_bits chunks; a short input becomes one sequence.
std::vector<Bits> split_sequences(Bits const& bits, std::size_t sequence_bits,
                                  std::size_t max_sequences);

}  // namespace turan
