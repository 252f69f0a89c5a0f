#pragma once

#include "sandnet/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sandnet {

enum class Gender { male, female, other };

char gender_code(Gender g) noexcept;

/// One roster row. The uid is the group letter followed by an in-group character.
struct StudentRecord {
    std::string uid;
    std::string semester;
    std::string group;
    double grade = 0.0;  // [0, 100]
    Gender gender = Gender::other;
    std::string major;
    int year = 1;  // 1 = freshman .. 6
    std::optional<double> intergrade;

    friend bool operator==(const StudentRecord&, const StudentRecord&) = default;
};

/// Validated, ordered list of students. Node i of any graph built from the
/// roster is records()[i].
class Roster {
public:
    Roster() = default;

    /// Throws ParseError if any record invariant fails. `source_lines`, when
    /// given, holds the input line of each record for error messages.
    explicit Roster(std::vector<StudentRecord> records, std::span<const std::size_t> source_lines = {});

    const std::vector<StudentRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const StudentRecord& operator[](std::size_t i) const { return records_.at(i); }

    std::optional<NodeId> index_of(std::string_view uid) const;

    /// Group ids in order of first appearance.
    std::vector<std::string> groups() const;

    friend bool operator==(const Roster& a, const Roster& b) { return a.records_ == b.records_; }

private:
    std::vector<StudentRecord> records_;
    std::unordered_map<std::string, NodeId> index_;
};

inline constexpr std::string_view kRosterHeader = "uid,semester,group,grade,gender,major,year,intergrade";

/// CSV with the header above. Leading '#' comment lines are skipped. Errors name
/// the physical line (header = line 1 when there are no comments).
Roster parse_roster(std::string_view text);

std::string emit_roster(const Roster& roster);

struct SyntheticRosterParams {
    std::size_t semesters = 3;
    std::size_t groups = 13;
    std::size_t students = 53;
    std::vector<std::string> majors = {"CS", "ENG", "MGT", "PW", "BIO"};
    std::vector<int> years = {2, 3, 4};
};

/// Deterministic in (params, seed). Groups are dealt round-robin to semesters and
/// students as evenly as possible to groups. Grades come from balanced A/B/C
/// bands, so every band occurs once there are at least 3 students.
Roster generate_synthetic_roster(const SyntheticRosterParams& params, std::uint64_t seed);

/// Friend approximation network: i ~ j (i != j) iff same semester and either
/// same group or same (major, year).
Graph build_fan(const Roster& roster);

enum class LetterGrade { A, B, C, D_or_below };

std::string_view to_string(LetterGrade grade) noexcept;

/// Inclusive lower bounds of the A, B and C bands.
struct GradeBands {
    double a = 90.0;
    double b = 80.0;
    double c = 70.0;
};

LetterGrade letter_grade(double grade, const GradeBands& bands = {});

}  // namespace sandnet
