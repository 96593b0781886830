#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fault_model.hpp"

namespace turan
{
//! One bit per element, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

struct RandomBitstream
{
    Bits bits;
    bool conditioned = false;
    std::size_t n_reads_consumed = 0;
    OperatingPoint source_op;
};

//! Pack LSB-first: bit i lands in byte i/8 at position i%8.
std::vector<std::uint8_t> pack_bits(std::span<std::uint8_t const> bits);
Bits unpack_bits(std::span<std::uint8_t const> bytes, std::size_t n_bits);

//---------------------------------------------------------------------------//
// TRNB container
//
//   offset 0  "TRNB"
//          4  version (1)
//          5  flags, bit 0 = conditioned
//          6  bit count, uint64 little-endian
//         14  packed bits, LSB-first
//---------------------------------------------------------------------------//
inline constexpr std::uint8_t kTrnbVersion = 1;
inline constexpr std::size_t kTrnbHeaderSize = 14;

std::vector<std::uint8_t> encode_trnb(Bits const& bits, bool conditioned);

//! Throws FormatError naming \p origin and the offending byte offset.
RandomBitstream decode_trnb(std::span<std::uint8_t const> data,
                            std::string const& origin = "<memory>");

void write_trnb(std::string const& path, Bits const& bits, bool conditioned);
RandomBitstream read_trnb(std::string const& path);

}  // namespace turan
