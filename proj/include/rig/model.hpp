#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rig/errors.hpp"

namespace rig {

// Sentinel recorded when a field cannot be determined reliably. It is a
// literal value, never a guess, and it does not count as a programming
// language anywhere.
inline constexpr std::string_view kUnknown = "UNKNOWN";

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

namespace paths {

// Separator canonicalization only: backslashes become forward slashes.
inline std::string slashes(std::string_view p) {
    std::string out(p);
    std::replace(out.begin(), out.end(), '\\', '/');
    return out;
}

inline bool is_absolute(std::string_view p) {
    if (p.empty()) return false;
    if (p.front() == '/') return true;
    // Drive-letter style, e.g. "C:/...".
    return p.size() >= 3 && std::isalpha(static_cast<unsigned char>(p[0])) &&
           p[1] == ':' && p[2] == '/';
}

// Canonical stored form: forward slashes; absolute paths under `root` are
// relativized against it; everything else is kept verbatim. Purely lexical,
// never touches the filesystem.
inline std::string canonical(std::string_view p, std::string_view root) {
    std::string s = slashes(p);
    if (s.empty() || root.empty()) return s;
    std::string r = slashes(root);
    while (r.size() > 1 && r.back() == '/') r.pop_back();
    if (!is_absolute(s) || !is_absolute(r)) return s;
    if (s == r) return ".";
    if (s.size() > r.size() && s.compare(0, r.size(), r) == 0 && s[r.size()] == '/') {
        return s.substr(r.size() + 1);
    }
    return s;
}

// Lexical join used when resolving command paths against a directory.
inline std::string join(std::string_view dir, std::string_view rel) {
    if (dir.empty()) return std::string(rel);
    if (rel.empty()) return std::string(dir);
    std::string out = slashes(dir);
    if (out.back() != '/') out.push_back('/');
    out += slashes(rel);
    return out;
}

inline std::string basename(std::string_view p) {
    std::string s = slashes(p);
    auto pos = s.find_last_of('/');
    return pos == std::string::npos ? s : s.substr(pos + 1);
}

} // namespace paths

// ---------------------------------------------------------------------------
// Repository and build system metadata
// ---------------------------------------------------------------------------

struct RepositoryInfo {
    std::string name;
    std::string root_path;
    std::string build_dir;
    std::string output_dir;
    std::string install_dir;
    std::string configure_cmd;
    std::string build_cmd;
    std::string test_cmd;
    std::string install_cmd;

    friend bool operator==(const RepositoryInfo&, const RepositoryInfo&) = default;
};

struct BuildSystemInfo {
    std::string name;        // cmake, meson, maven, cargo, npm, go, ...
    std::string variant;     // generator or flavor, empty when not applicable
    std::string build_type;  // empty when not applicable

    friend bool operator==(const BuildSystemInfo&, const BuildSystemInfo&) = default;
};

// ---------------------------------------------------------------------------
// Evidence
// ---------------------------------------------------------------------------

// One concrete file reference; renders canonically as "path:line".
struct FileLine {
    std::string path;
    int line = 1;

    std::string to_string() const { return path + ":" + std::to_string(line); }

    friend bool operator==(const FileLine&, const FileLine&) = default;
};

using CallStack = std::vector<FileLine>;
using Location = std::variant<FileLine, CallStack>;

// Provenance record. Every node in a well-formed graph points at one or more
// of these, and each must carry at least one concrete location.
struct Evidence {
    std::string id;
    std::vector<Location> locations;

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

// ---------------------------------------------------------------------------
// Packages
// ---------------------------------------------------------------------------

// How an external package is resolved in its ecosystem.
struct PackageManager {
    std::string id;
    std::string name;          // vcpkg, maven, npm, cargo, pip, ...
    std::string package_name;  // coordinates within that ecosystem

    friend bool operator==(const PackageManager&, const PackageManager&) = default;
};

struct ExternalPackage {
    std::string id;
    std::string name;
    std::string package_manager_id;  // empty when unresolved

    // Attached object consumed by add_*; registered into the graph's
    // package manager collection and not stored on the package itself.
    std::optional<PackageManager> package_manager;

    friend bool operator==(const ExternalPackage& a, const ExternalPackage& b) {
        return a.id == b.id && a.name == b.name &&
               a.package_manager_id == b.package_manager_id;
    }
};

// ---------------------------------------------------------------------------
// Graph nodes
// ---------------------------------------------------------------------------

enum class NodeKind { component, aggregator, runner, test };

inline std::string_view node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::component: return "component";
        case NodeKind::aggregator: return "aggregator";
        case NodeKind::runner: return "runner";
        case NodeKind::test: return "test";
    }
    return "?";
}

// Fields shared by all graph nodes. depends_on_ids may reference any node
// kind; dangling references are legal until validation.
struct RigNode {
    std::string id;
    std::string name;
    std::set<std::string> depends_on_ids;
    std::set<std::string> evidence_ids;

    // Attached objects consumed by add_*: registered into the graph's
    // evidence collection, their ids merged into evidence_ids.
    std::vector<Evidence> evidence;

protected:
    bool base_equal(const RigNode& o) const {
        return id == o.id && name == o.name && depends_on_ids == o.depends_on_ids &&
               evidence_ids == o.evidence_ids;
    }
};

enum class ComponentType {
    executable,
    static_library,
    shared_library,
    package_library,
    vm,
    interpreted,
    unknown,
};

inline std::string_view component_type_name(ComponentType t) {
    switch (t) {
        case ComponentType::executable: return "executable";
        case ComponentType::static_library: return "static_library";
        case ComponentType::shared_library: return "shared_library";
        case ComponentType::package_library: return "package_library";
        case ComponentType::vm: return "vm";
        case ComponentType::interpreted: return "interpreted";
        case ComponentType::unknown: return "unknown";
    }
    return "unknown";
}

inline std::optional<ComponentType> component_type_from_name(std::string_view s) {
    for (auto t : {ComponentType::executable, ComponentType::static_library,
                   ComponentType::shared_library, ComponentType::package_library,
                   ComponentType::vm, ComponentType::interpreted, ComponentType::unknown}) {
        if (component_type_name(t) == s) return t;
    }
    return std::nullopt;
}

// Intermediate base for nodes that produce something on disk.
struct Artifact : RigNode {
    std::string output_path;  // repo-relative; may be empty only for interpreted
};

// A buildable or interpreted artifact.
struct Component : Artifact {
    ComponentType type = ComponentType::unknown;
    std::string programming_language;  // lowercase tag or UNKNOWN
    std::vector<std::string> source_files;
    std::set<std::string> external_packages_ids;

    // Attached objects consumed by add_component.
    std::vector<ExternalPackage> packages;

    // Hydrated view of external_packages_ids; derived, never serialized.
    std::vector<ExternalPackage> external_packages;

    friend bool operator==(const Component& a, const Component& b) {
        return a.base_equal(b) && a.output_path == b.output_path && a.type == b.type &&
               a.programming_language == b.programming_language &&
               a.source_files == b.source_files &&
               a.external_packages_ids == b.external_packages_ids;
    }
};

// Orchestration target; produces no artifact, structure lives in
// depends_on_ids alone.
struct Aggregator : RigNode {
    friend bool operator==(const Aggregator& a, const Aggregator& b) {
        return a.base_equal(b);
    }
};

// A command invocation that produces no artifact.
struct Runner : RigNode {
    std::vector<std::string> arguments;
    std::set<std::string> args_nodes_ids;  // nodes referenced inside arguments

    friend bool operator==(const Runner& a, const Runner& b) {
        return a.base_equal(b) && a.arguments == b.arguments &&
               a.args_nodes_ids == b.args_nodes_ids;
    }
};

struct TestDefinition : RigNode {
    std::string test_executable_component_id;  // Component or Runner; empty if none
    std::set<std::string> test_components_ids;
    std::set<std::string> components_being_tested_ids;
    std::vector<std::string> source_files;
    std::string framework;  // ctest, junit, pytest, jest, ...

    // Hydrated references; derived, never serialized.
    std::variant<std::monostate, Component, Runner> executable;
    std::vector<Component> tested_components;

    friend bool operator==(const TestDefinition& a, const TestDefinition& b) {
        return a.base_equal(b) &&
               a.test_executable_component_id == b.test_executable_component_id &&
               a.test_components_ids == b.test_components_ids &&
               a.components_being_tested_ids == b.components_being_tested_ids &&
               a.source_files == b.source_files && a.framework == b.framework;
    }
};

// ---------------------------------------------------------------------------
// RIG container
// ---------------------------------------------------------------------------

namespace detail {
struct FinalizeAccess;
}

// Top-level container: one RepositoryInfo, one BuildSystemInfo, and
// identifier-keyed collections for every entity kind. Construction is
// single-writer; once finalized the graph is immutable and safe to share
// across readers.
class RIG {
public:
    RIG(RepositoryInfo repo, BuildSystemInfo build)
        : repo_(std::move(repo)), build_(std::move(build)) {
        if (repo_.name.empty()) throw ConstructionError("empty repository name");
        if (build_.name.empty()) throw ConstructionError("empty build system name");
        if (build_.name != lower(build_.name))
            throw ConstructionError("build system name must be lowercase: " + build_.name);
        repo_.root_path = paths::slashes(repo_.root_path);
        repo_.build_dir = paths::slashes(repo_.build_dir);
        repo_.output_dir = paths::slashes(repo_.output_dir);
        repo_.install_dir = paths::slashes(repo_.install_dir);
    }

    const RepositoryInfo& repo() const { return repo_; }
    const BuildSystemInfo& build() const { return build_; }
    bool finalized() const { return finalized_; }

    const std::map<std::string, Component>& components() const { return components_; }
    const std::map<std::string, Aggregator>& aggregators() const { return aggregators_; }
    const std::map<std::string, Runner>& runners() const { return runners_; }
    const std::map<std::string, TestDefinition>& tests() const { return tests_; }
    const std::map<std::string, ExternalPackage>& external_packages() const {
        return external_packages_;
    }
    const std::map<std::string, PackageManager>& package_managers() const {
        return package_managers_;
    }
    const std::map<std::string, Evidence>& evidence() const { return evidence_; }

    std::string add_component(Component c) {
        check_mutable(c.id, components_, "component");
        if (c.programming_language.empty())
            throw ConstructionError("component " + c.id + ": empty programming_language");
        if (c.programming_language != kUnknown &&
            c.programming_language != lower(c.programming_language))
            throw ConstructionError("component " + c.id +
                                    ": programming_language must be lowercase: " +
                                    c.programming_language);
        if (c.type == ComponentType::interpreted) {
            if (c.source_files.empty())
                throw ConstructionError("component " + c.id +
                                        ": interpreted component requires source_files");
        } else if (c.output_path.empty()) {
            throw ConstructionError("component " + c.id + ": empty output_path");
        }
        absorb_common(c);
        c.output_path = paths::canonical(c.output_path, repo_.root_path);
        for (auto& s : c.source_files) s = paths::canonical(s, repo_.root_path);
        for (auto& pkg : c.packages) {
            if (pkg.package_manager) {
                register_shared(package_managers_, *pkg.package_manager, "package manager");
                if (pkg.package_manager_id.empty())
                    pkg.package_manager_id = pkg.package_manager->id;
                pkg.package_manager.reset();
            }
            register_shared(external_packages_, pkg, "external package");
            c.external_packages_ids.insert(pkg.id);
        }
        c.packages.clear();
        std::string id = c.id;
        components_.emplace(id, std::move(c));
        return id;
    }

    std::string add_aggregator(Aggregator a) {
        check_mutable(a.id, aggregators_, "aggregator");
        absorb_common(a);
        std::string id = a.id;
        aggregators_.emplace(id, std::move(a));
        return id;
    }

    std::string add_runner(Runner r) {
        check_mutable(r.id, runners_, "runner");
        absorb_common(r);
        std::string id = r.id;
        runners_.emplace(id, std::move(r));
        return id;
    }

    std::string add_test(TestDefinition t) {
        check_mutable(t.id, tests_, "test");
        absorb_common(t);
        for (auto& s : t.source_files) s = paths::canonical(s, repo_.root_path);
        std::string id = t.id;
        tests_.emplace(id, std::move(t));
        return id;
    }

    // Registers a free-standing evidence/package/manager entry. Identical
    // re-registration is a no-op; conflicting content is a duplicate.
    void add_evidence(Evidence e) {
        canonicalize_evidence(e);
        register_shared(evidence_, e, "evidence");
    }
    void add_external_package(ExternalPackage p) {
        if (p.name.empty()) throw ConstructionError("empty external package name");
        if (p.package_manager) {
            register_shared(package_managers_, *p.package_manager, "package manager");
            if (p.package_manager_id.empty()) p.package_manager_id = p.package_manager->id;
            p.package_manager.reset();
        }
        register_shared(external_packages_, p, "external package");
    }
    void add_package_manager(PackageManager m) {
        if (m.name.empty() || m.package_name.empty())
            throw ConstructionError("package manager requires name and package_name");
        register_shared(package_managers_, m, "package manager");
    }

    // Looks the identifier up across all node collections, in schema order.
    const RigNode* find_node(std::string_view id, NodeKind* kind = nullptr) const {
        if (auto it = components_.find(std::string(id)); it != components_.end()) {
            if (kind) *kind = NodeKind::component;
            return &it->second;
        }
        if (auto it = aggregators_.find(std::string(id)); it != aggregators_.end()) {
            if (kind) *kind = NodeKind::aggregator;
            return &it->second;
        }
        if (auto it = runners_.find(std::string(id)); it != runners_.end()) {
            if (kind) *kind = NodeKind::runner;
            return &it->second;
        }
        if (auto it = tests_.find(std::string(id)); it != tests_.end()) {
            if (kind) *kind = NodeKind::test;
            return &it->second;
        }
        return nullptr;
    }

    template <typename F>
    void for_each_node(F&& f) const {
        for (const auto& [id, n] : components_) f(NodeKind::component, n);
        for (const auto& [id, n] : aggregators_) f(NodeKind::aggregator, n);
        for (const auto& [id, n] : runners_) f(NodeKind::runner, n);
        for (const auto& [id, n] : tests_) f(NodeKind::test, n);
    }

    std::size_t node_count() const {
        return components_.size() + aggregators_.size() + runners_.size() + tests_.size();
    }

    // Reconstructs object references from identifier sets: components get
    // their external package objects, tests get their executable and the
    // components under test. Idempotent; serialized fields are untouched.
    RIG& hydrate() {
        for (auto& [id, c] : components_) {
            c.external_packages.clear();
            for (const auto& pid : c.external_packages_ids) {
                auto it = external_packages_.find(pid);
                if (it == external_packages_.end())
                    throw BrokenReferenceError("component " + id +
                                               ": unresolvable external package " + pid);
                c.external_packages.push_back(it->second);
            }
        }
        for (auto& [id, t] : tests_) {
            t.executable = std::monostate{};
            if (!t.test_executable_component_id.empty()) {
                const auto& ref = t.test_executable_component_id;
                if (auto it = components_.find(ref); it != components_.end()) {
                    t.executable = it->second;
                } else if (auto rit = runners_.find(ref); rit != runners_.end()) {
                    t.executable = rit->second;
                } else {
                    throw BrokenReferenceError("test " + id +
                                               ": unresolvable test executable " + ref);
                }
            }
            t.tested_components.clear();
            for (const auto& cid : t.components_being_tested_ids) {
                auto it = components_.find(cid);
                if (it == components_.end())
                    throw BrokenReferenceError("test " + id +
                                               ": unresolvable component under test " + cid);
                t.tested_components.push_back(it->second);
            }
        }
        return *this;
    }

    // Structural equality over serialized content; hydration state and the
    // finalized flag are not part of it.
    friend bool operator==(const RIG& a, const RIG& b) {
        return a.repo_ == b.repo_ && a.build_ == b.build_ && a.components_ == b.components_ &&
               a.aggregators_ == b.aggregators_ && a.runners_ == b.runners_ &&
               a.tests_ == b.tests_ && a.external_packages_ == b.external_packages_ &&
               a.package_managers_ == b.package_managers_ && a.evidence_ == b.evidence_;
    }

private:
    friend struct detail::FinalizeAccess;

    static std::string lower(std::string_view s) {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    }

    template <typename Map>
    void check_mutable(const std::string& id, const Map& m, const char* what) const {
        if (finalized_) throw StateError("cannot add to a finalized graph");
        if (id.empty()) throw ConstructionError(std::string("empty ") + what + " id");
        if (m.count(id))
            throw DuplicateIdError(std::string("duplicate ") + what + " id: " + id);
    }

    void canonicalize_evidence(Evidence& e) {
        if (e.id.empty()) throw ConstructionError("empty evidence id");
        for (auto& loc : e.locations) {
            if (auto* fl = std::get_if<FileLine>(&loc)) {
                fl->path = paths::canonical(fl->path, repo_.root_path);
            } else {
                for (auto& frame : std::get<CallStack>(loc))
                    frame.path = paths::canonical(frame.path, repo_.root_path);
            }
        }
    }

    void absorb_common(RigNode& n) {
        for (auto& e : n.evidence) {
            canonicalize_evidence(e);
            register_shared(evidence_, e, "evidence");
            n.evidence_ids.insert(e.id);
        }
        n.evidence.clear();
    }

    template <typename T>
    void register_shared(std::map<std::string, T>& m, const T& obj, const char* what) {
        if (obj.id.empty()) throw ConstructionError(std::string("empty ") + what + " id");
        auto it = m.find(obj.id);
        if (it == m.end()) {
            m.emplace(obj.id, obj);
        } else if (!(it->second == obj)) {
            throw DuplicateIdError(std::string("duplicate ") + what + " id: " + obj.id);
        }
    }

    RepositoryInfo repo_;
    BuildSystemInfo build_;
    std::map<std::string, Component> components_;
    std::map<std::string, Aggregator> aggregators_;
    std::map<std::string, Runner> runners_;
    std::map<std::string, TestDefinition> tests_;
    std::map<std::string, ExternalPackage> external_packages_;
    std::map<std::string, PackageManager> package_managers_;
    std::map<std::string, Evidence> evidence_;
    bool finalized_ = false;
};

namespace detail {
struct FinalizeAccess {
    static void mark(RIG& r) { r.finalized_ = true; }
};
} // namespace detail

} // namespace rig
