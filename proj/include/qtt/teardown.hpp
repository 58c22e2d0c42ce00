#pragma once
// Iterative release of shared pointers. Destructors of linked structures
// hand their children to defer_release, so freeing a long chain runs in a
// loop on the thread that drops the last reference.

#include <memory>

namespace qtt::detail {

void defer_release(std::shared_ptr<const void> p);

}  // namespace qtt::detail
