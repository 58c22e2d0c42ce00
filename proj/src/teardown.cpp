#include "qtt/teardown.hpp"

#include <vector>

namespace qtt::detail {

namespace {
thread_local std::vector<std::shared_ptr<const void>>* pending = nullptr;
}

void defer_release(std::shared_ptr<const void> p) {
    if (!p) return;
    if (pending) {
        pending->push_back(std::move(p));
        return;
    }
    std::vector<std::shared_ptr<const void>> work;
    pending = &work;
    work.push_back(std::move(p));
    while (!work.empty()) {
        auto next = std::move(work.back());
        work.pop_back();
        next.reset();
    }
    pending = nullptr;
}

}  // namespace qtt::detail
