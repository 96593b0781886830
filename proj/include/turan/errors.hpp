#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace turan
{
// Invalid arguments throw std::invalid_argument and bad indices throw
// std::out_of_range. The types below cover the remaining domain failures.

//! Characterization found no row with nonzero entropy.
class NoEntropySource : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Malformed input file; carries the path and, when known, a byte offset.
class FormatError : public std::runtime_error
{
  public:
    FormatError(std::string path, std::string what,
                std::optional<std::uint64_t> offset = std::nullopt);

    std::string const& path() const noexcept { return path_; }
    std::optional<std::uint64_t> offset() const noexcept { return offset_; }

  private:
    std::string path_;
    std::optional<std::uint64_t> offset_;
};

}  // namespace turan
