#include "turan/errors.hpp"

#include <utility>

namespace turan
{
namespace
{
std::string describe(std::string const& path, std::string const& what,
                     std::optional<std::uint64_t> offset)
{
    std::string msg = path + ": " + what;
    if (offset)
        msg += " (byte offset " + std::to_string(*offset) + ")";
    return msg;
}
}  // namespace

FormatError::FormatError(std::string path, std::string what,
                         std::optional<std::uint64_t> offset)
    : std::runtime_error{describe(path, what, offset)}
    , path_{std::move(path)}
    , offset_{offset}
{
}

}  // namespace turan
