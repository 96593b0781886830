#include "turan/trng.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

namespace turan
{
void TrngConfig::validate() const
{
    if (!(entropy_target > 0))
        throw std::invalid_argument("entropy_target must be positive");
    if (!(source.entropy_per_read > 0))
        throw std::invalid_argument("source entropy per read must be positive");
    if (source.row_count == 0)
        throw std::invalid_argument("source must span at least one row");
    if (!(direct_cell_threshold > 0 && direct_cell_threshold <= 1))
        throw std::invalid_argument("direct_cell_threshold must lie in (0, 1]");
    source.op.validate();
}

std::size_t n_reads_required(double entropy_target, double per_read)
{
    if (!(per_read > 0) || !std::isfinite(per_read))
        throw std::invalid_argument("entropy per read must be positive");
    if (!(entropy_target > 0))
        throw std::invalid_argument("entropy target must be positive");
    double const ratio = entropy_target / per_read;
    // shave rounding noise so 256 / (256 / k) is still k
    auto n = static_cast<std::size_t>(std::ceil(ratio * (1 - 1e-12)));
    return std::max<std::size_t>(n, 1);
}

Sha256Digest sha256(std::span<std::uint8_t const> message)
{
    Sha256Digest digest{};
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free};
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), message.data(), message.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1
        || len != digest.size())
    {
        throw std::runtime_error("SHA-256 computation failed");
    }
    return digest;
}

RandomBitstream accumulate_raw(SramBlock& block, TrngConfig const& cfg,
                               RandomStream& stream)
{
    cfg.validate();
    auto const& src = cfg.source;
    std::size_t const n = n_reads_required(cfg.entropy_target, src.entropy_per_read);
    std::size_t const cols = block.geometry().cols;

    BitRow const ones(cols, 1);
    for (std::size_t r = 0; r < src.row_count; ++r)
        block.write_row(src.first_row + r, ones);

    RandomBitstream out;
    out.source_op = src.op;
    out.n_reads_consumed = n;
    out.bits.reserve(n * src.row_count * cols);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t r = 0; r < src.row_count; ++r)
        {
            BitRow const bits = block.read_row(src.first_row + r, src.op, stream);
            out.bits.insert(out.bits.end(), bits.begin(), bits.end());
        }
    }
    return out;
}

RandomBitstream generate(SramBlock& block, TrngConfig const& cfg,
                         std::size_t n_bits, RandomStream& stream)
{
    if (n_bits == 0)
        throw std::invalid_argument("requested zero output bits");

    std::size_t const digests = (n_bits + 255) / 256;
    RandomBitstream out;
    out.conditioned = true;
    out.source_op = cfg.source.op;
    out.bits.reserve(digests * 256);
    for (std::size_t d = 0; d < digests; ++d)
    {
        RandomBitstream raw = accumulate_raw(block, cfg, stream);
        out.n_reads_consumed += raw.n_reads_consumed;
        Sha256Digest const digest = sha256(pack_bits(raw.bits));
        Bits const bits = unpack_bits(digest, 256);
        out.bits.insert(out.bits.end(), bits.begin(), bits.end());
    }
    out.bits.resize(n_bits);
    return out;
}

std::vector<CellIndex> find_direct_cells(SramBlock& block,
                                         OperatingPoint const& op,
                                         std::size_t reads, double threshold,
                                         RandomStream& stream)
{
    if (reads < 1000)
        throw std::invalid_argument("direct-cell search needs at least 1000 reads");

    constexpr std::size_t screen_reads = 1000;
    constexpr double screen_threshold = 0.98;

    auto const& geo = block.geometry();
    auto screen = characterize_rows(block, op, DataPattern{PatternKind::F},
                                    screen_reads, stream);

    std::vector<CellIndex> result;
    std::map<std::size_t, std::vector<std::size_t>> candidates;
    for (std::size_t row = 0; row < geo.total_rows(); ++row)
    {
        for (std::size_t c = 0; c < geo.cols; ++c)
        {
            double const h = screen.cell_entropy[row * geo.cols + c];
            if (reads == screen_reads ? h >= threshold : h >= screen_threshold)
                candidates[row].push_back(c);
        }
    }
    if (reads == screen_reads)
    {
        for (auto const& [row, cols] : candidates)
            for (auto c : cols)
                result.push_back({row, c});
        return result;
    }

    BitRow const ones(geo.cols, 1);
    for (auto const& [row, cols] : candidates)
    {
        block.write_row(row, ones);
        std::vector<std::size_t> count(geo.cols, 0);
        for (std::size_t i = 0; i < reads; ++i)
        {
            BitRow const bits = block.read_row(row, op, stream);
            for (auto c : cols)
                count[c] += bits[c];
        }
        for (auto c : cols)
        {
            double const p = static_cast<double>(count[c]) / static_cast<double>(reads);
            if (shannon_entropy(p) >= threshold)
                result.push_back({row, c});
        }
    }
    return result;
}

RandomBitstream direct_stream(SramBlock& block,
                              std::vector<CellIndex> const& cells,
                              OperatingPoint const& op, std::size_t n_bits,
                              RandomStream& stream)
{
    if (cells.empty())
        throw std::invalid_argument("direct stream needs at least one cell");

    std::vector<CellIndex> order = cells;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());

    std::vector<std::size_t> rows;
    for (auto const& cell : order)
    {
        if (cell.col >= block.geometry().cols)
            throw std::out_of_range("direct cell column out of range");
        if (rows.empty() || rows.back() != cell.row)
            rows.push_back(cell.row);
    }

    RandomBitstream out;
    out.source_op = op;
    out.bits.reserve(n_bits);
    BitRow const ones(block.geometry().cols, 1);
    while (out.bits.size() < n_bits)
    {
        std::size_t next = 0;
        for (std::size_t row : rows)
        {
            block.write_row(row, ones);
            BitRow const bits = block.read_row(row, op, stream);
            ++out.n_reads_consumed;
            for (; next < order.size() && order[next].row == row; ++next)
            {
                if (out.bits.size() < n_bits)
                    out.bits.push_back(bits[order[next].col]);
            }
        }
    }
    return out;
}

}  // namespace turan
