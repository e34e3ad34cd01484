#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>

namespace edgereconf {

/// Strongly typed index. The tag keeps site, device, link and request ids
/// from being mixed up at call sites.
template <typename Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

    constexpr std::size_t index() const { return value; }
    constexpr auto operator<=>(const Id&) const = default;
};

template <typename Tag>
std::ostream& operator<<(std::ostream& os, Id<Tag> id) {
    return os << id.value;
}

using SiteId = Id<struct SiteTag>;
using DeviceId = Id<struct DeviceTag>;
using LinkId = Id<struct LinkTag>;
using RequestId = Id<struct RequestTag>;

} // namespace edgereconf

template <typename Tag>
struct std::hash<edgereconf::Id<Tag>> {
    std::size_t operator()(edgereconf::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
