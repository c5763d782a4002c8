#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <milnorkit/specfile.hpp>

namespace milnorkit
{

inline constexpr std::string_view report_header = "milnorkit-report 1";

enum class TaskStatus { ok, undetermined, error };

const char *to_string(TaskStatus s);

struct TaskResult {
    std::size_t index = 0; // 1-based position in the task list
    std::size_t line = 0;
    std::string kind;
    std::string text;
    TaskStatus status = TaskStatus::ok;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    std::vector<std::string> lines;
    // Discrepancy flags; each names the task that raised it.
    std::vector<std::string> notes;
};

struct Report {
    std::string family;
    std::vector<TaskResult> tasks;
};

// Command-line overrides; unset fields fall back to the spec or the task.
struct ReportOptions {
    std::optional<int> order;
    std::optional<int> cap;
    std::optional<int> budget;
    std::optional<double> epsilon;
    std::optional<std::uint64_t> seed;
};

TaskResult run_task(const FamilySpec &spec, const TaskSpec &task, std::size_t index, const ReportOptions &options = {});

// Tasks run concurrently; results keep the task order.
Report run_report(const FamilySpec &spec, const ReportOptions &options = {});

// 0 when every verdict is determined, 2 if some is undetermined, 1 on error.
int exit_code(const TaskResult &r);
int exit_code(const Report &r);

std::string render_text(const Report &r);
std::string render_json(const Report &r);

// 12 significant digits.
std::string format_float(double x);

// A bundled spec name or a path to a spec file.
FamilySpec load_spec(const std::string &name_or_path);

} // namespace milnorkit
