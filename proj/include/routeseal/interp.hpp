#pragma once

#include <string>
#include <vector>

#include "routeseal/ast.hpp"

namespace routeseal::router {
class RouterState;
}

namespace routeseal::minilang {

enum class ExitStatus { Normal, TamperDetected, RuntimeError };

std::string_view exit_status_name(ExitStatus s);

struct ExitReport {
    ExitStatus status = ExitStatus::Normal;
    std::vector<std::string> output;    // print lines; ends with the tamper message on tampering
    std::string error;                  // RuntimeError detail
    std::string tamper_message;

    bool ok() const { return status == ExitStatus::Normal; }
};

// Interprets the program from its entry function. A router must be provided
// when the program contains forward_call expressions; it is attached to the
// program's registry for the duration of the run.
ExitReport run(const Program& program, router::RouterState* router = nullptr);

inline constexpr std::size_t kMaxCallDepth = 4096;

}  // namespace routeseal::minilang
