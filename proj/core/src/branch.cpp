#include "cluster_bifurc/branch.hpp"

#include <string>

#include "cluster_bifurc/errors.hpp"

namespace cluster_bifurc {

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::primary:
      return "primary";
    case EventKind::secondary:
      return "secondary";
    default:
      return "turning";
  }
}

EventKind event_kind_from_string(std::string_view name) {
  if (name == "primary") return EventKind::primary;
  if (name == "secondary") return EventKind::secondary;
  if (name == "turning") return EventKind::turning;
  throw UsageError("unknown event kind '" + std::string(name) + "'");
}

}  // namespace cluster_bifurc
