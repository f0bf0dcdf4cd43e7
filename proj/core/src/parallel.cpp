#include "lancaster/parallel.hpp"

#include <algorithm>

namespace lancaster {

std::size_t resolve_threads(std::size_t requested) noexcept {
    if (requested > 0) return requested;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace lancaster
