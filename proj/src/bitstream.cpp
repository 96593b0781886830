#include "turan/bitstream.hpp"

#include <fstream>
#include <iterator>

#include "turan/errors.hpp"

namespace turan
{
std::vector<std::uint8_t> pack_bits(std::span<std::uint8_t const> bits)
{
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
    {
        if (bits[i])
            bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    }
    return bytes;
}

Bits unpack_bits(std::span<std::uint8_t const> bytes, std::size_t n_bits)
{
    Bits bits(n_bits);
    for (std::size_t i = 0; i < n_bits; ++i)
        bits[i] = (bytes[i / 8] >> (i % 8)) & 1u;
    return bits;
}

std::vector<std::uint8_t> encode_trnb(Bits const& bits, bool conditioned)
{
    std::vector<std::uint8_t> out{'T', 'R', 'N', 'B', kTrnbVersion,
                                  static_cast<std::uint8_t>(conditioned ? 1 : 0)};
    std::uint64_t const n = bits.size();
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    auto const packed = pack_bits(bits);
    out.insert(out.end(), packed.begin(), packed.end());
    return out;
}

RandomBitstream decode_trnb(std::span<std::uint8_t const> data,
                            std::string const& origin)
{
    if (data.size() < kTrnbHeaderSize)
    {
        throw FormatError(origin, "truncated TRNB header", data.size());
    }
    static constexpr char magic[] = {'T', 'R', 'N', 'B'};
    for (std::size_t i = 0; i < 4; ++i)
    {
        if (data[i] != static_cast<std::uint8_t>(magic[i]))
            throw FormatError(origin, "bad TRNB magic", i);
    }
    if (data[4] != kTrnbVersion)
    {
        throw FormatError(origin,
                          "unsupported TRNB version " + std::to_string(data[4]), 4);
    }
    if (data[5] & ~1u)
        throw FormatError(origin, "unknown TRNB flag bits", 5);

    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i)
        n |= static_cast<std::uint64_t>(data[6 + i]) << (8 * i);

    std::size_t const payload = data.size() - kTrnbHeaderSize;
    if (n > payload * 8ULL)
    {
        throw FormatError(origin,
                          "bit count " + std::to_string(n)
                              + " exceeds payload", data.size());
    }
    if ((n + 7) / 8 != payload)
    {
        throw FormatError(origin, "trailing bytes after payload",
                          kTrnbHeaderSize + (n + 7) / 8);
    }

    RandomBitstream stream;
    stream.conditioned = data[5] & 1u;
    stream.bits = unpack_bits(data.subspan(kTrnbHeaderSize), n);
    return stream;
}

void write_trnb(std::string const& path, Bits const& bits, bool conditioned)
{
    auto const bytes = encode_trnb(bits, conditioned);
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out)
        throw FormatError(path, "cannot open for writing");
    out.write(reinterpret_cast<char const*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw FormatError(path, "write failed");
}

RandomBitstream read_trnb(std::string const& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw FormatError(path, "cannot open for reading");
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>{in},
                                    std::istreambuf_iterator<char>{}};
    return decode_trnb(bytes, path);
}

}  // namespace turan
