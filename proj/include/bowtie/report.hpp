#ifndef BOWTIE_REPORT_HPP
#define BOWTIE_REPORT_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace bowtie {

/// One violated law, with enough of a witness to reproduce it by hand.
struct Violation {
    std::string law;      // e.g. "associativity", "ZS7", "CC2"
    std::string witness;  // element ids involved, in a fixed format
};

struct Report {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    void add(std::string law, std::string witness) {
        violations.push_back({std::move(law), std::move(witness)});
    }

    std::string str() const {
        if (ok()) return "ok";
        std::string out;
        for (const auto& v : violations) {
            out += v.law;
            out += " at ";
            out += v.witness;
            out += "\n";
        }
        return out;
    }
};

/// Thrown when a theorem-level identity fails; this is a bug in the
/// library, never a user error.  The CLI maps it to exit code 3.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace bowtie

#endif
