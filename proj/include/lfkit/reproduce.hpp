#ifndef LFKIT_REPRODUCE_HPP
#define LFKIT_REPRODUCE_HPP

#include <string>
#include <utility>
#include <vector>

namespace lfkit {

struct ReproduceOptions {
    unsigned jobs = 1;
};

struct ReproduceCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct ReproduceResult {
    std::string target;
    std::vector<ReproduceCheck> checks;
    std::string report;                                      ///< structured text
    std::vector<std::pair<std::string, std::string>> files;  ///< (file name, contents)

    bool ok() const;
    /// Report followed by one PASS/FAIL line per check.
    std::string text() const;
};

const std::vector<std::string>& reproduce_targets();

/// Throws ParseError for an unknown target.
ReproduceResult reproduce(const std::string& target, const ReproduceOptions& options = {});

/// Writes <target>.txt and the extra files into dir (created if needed).
void write_reproduction(const ReproduceResult& r, const std::string& dir);

}  // namespace lfkit

#endif  // LFKIT_REPRODUCE_HPP
