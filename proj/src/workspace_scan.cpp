// Copyright 2026 The meros-tools Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "meros/workspace_scan.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace meros {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string s) {
  const char* space = " \t\r\n";
  s.erase(0, s.find_first_not_of(space));
  s.erase(s.find_last_not_of(space) + 1);
  return s;
}

std::string strip_xml_comments(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find("<!--", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    auto close = text.find("-->", open + 4);
    if (close == std::string_view::npos) break;
    pos = close + 3;
  }
  return out;
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool hidden(const fs::path& path) {
  const std::string name = path.filename().string();
  return name.size() > 1 && name.front() == '.';
}

struct PackageDraft {
  fs::path dir;
  ManifestSummary manifest;
  Package package;
  std::vector<std::string> meta_files;
};

}  // namespace

ManifestSummary classify_manifest(std::string_view manifest_text,
                                  fs::path path) {
  const std::string text = strip_xml_comments(manifest_text);
  ManifestSummary summary;
  summary.path = std::move(path);

  static const std::regex name_re(R"(<name\s*>([^<]*)</name\s*>)");
  std::smatch match;
  if (!std::regex_search(text, match, name_re) || trim(match[1].str()).empty()) {
    throw ManifestError("manifest has no <name> element");
  }
  summary.name = trim(match[1].str());

  static const std::regex export_re(R"(<export(\s[^>]*)?>([\s\S]*?)</export\s*>)");
  static const std::regex meta_re(
      R"(<metapackage\s*/>|<metapackage\s*>\s*</metapackage\s*>)");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), export_re);
       it != std::sregex_iterator(); ++it) {
    const std::string body = (*it)[2].str();
    if (std::regex_search(body, meta_re)) summary.is_metapackage = true;
  }

  static const std::regex dep_re(
      R"(<(depend|build_depend|build_export_depend|exec_depend|run_depend)(\s[^>]*)?>([^<]*)</\1\s*>)");
  std::set<std::string> deps;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), dep_re);
       it != std::sregex_iterator(); ++it) {
    std::string dep = trim((*it)[3].str());
    if (!dep.empty()) deps.insert(std::move(dep));
  }
  summary.dependencies.assign(deps.begin(), deps.end());
  return summary;
}

std::optional<ActionFileSections> split_action_file(std::string_view text) {
  std::vector<std::string> sections(1);
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "---") {
      sections.emplace_back();
    } else {
      sections.back() += line + "\n";
    }
  }
  if (sections.size() != 3) return std::nullopt;
  return ActionFileSections{sections[0], sections[1], sections[2]};
}

ActionDataStructure action_data_for_file(std::string_view stem) {
  const std::string base(stem);
  return {base + "Goal", base + "Feedback", base + "Result"};
}

ScanResult scan(const fs::path& root) {
  ScanResult result;
  auto report = [&](Severity severity, const fs::path& path, std::string message) {
    result.diagnostics.push_back({severity, path.generic_string(), std::move(message)});
  };

  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    report(Severity::Error, root, "unreadable root: not a directory");
    return result;
  }

  std::vector<fs::path> files;
  std::vector<fs::path> package_dirs;
  if (fs::exists(root / "package.xml")) package_dirs.push_back(root);
  fs::recursive_directory_iterator it(
      root, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    report(Severity::Error, root, "unreadable root: " + ec.message());
    return result;
  }
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) {
      report(Severity::Error, root, "traversal failed: " + ec.message());
      return result;
    }
    const fs::path& path = it->path();
    if (hidden(path)) {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    if (it->is_directory()) {
      if (fs::exists(path / "package.xml")) package_dirs.push_back(path);
    } else if (it->is_regular_file()) {
      files.push_back(path);
    }
  }
  std::sort(files.begin(), files.end());
  std::sort(package_dirs.begin(), package_dirs.end());

  std::map<fs::path, PackageDraft> drafts;
  std::map<std::string, fs::path> names;
  bool failed = false;
  for (const auto& dir : package_dirs) {
    const fs::path manifest_path = dir / "package.xml";
    auto text = read_file(manifest_path);
    if (!text) {
      report(Severity::Error, manifest_path, "cannot read manifest");
      failed = true;
      continue;
    }
    PackageDraft draft;
    draft.dir = dir;
    try {
      draft.manifest = classify_manifest(*text, dir);
    } catch (const ManifestError& e) {
      report(Severity::Error, manifest_path, e.what());
      failed = true;
      continue;
    }
    auto [existing, inserted] = names.emplace(draft.manifest.name, dir);
    if (!inserted) {
      report(Severity::Error, dir,
             "duplicate package name '" + draft.manifest.name + "' (also in " +
                 existing->second.generic_string() + ")");
      failed = true;
      continue;
    }
    draft.package.name = draft.manifest.name;
    drafts.emplace(dir, std::move(draft));
  }

  for (const auto& file : files) {
    // Nearest enclosing package directory owns the file.
    PackageDraft* owner = nullptr;
    for (fs::path dir = file.parent_path();; dir = dir.parent_path()) {
      auto found = drafts.find(dir);
      if (found != drafts.end()) {
        owner = &found->second;
        break;
      }
      if (dir == root || !dir.has_relative_path() || dir == dir.parent_path()) break;
    }
    if (!owner) continue;

    const fs::path rel = file.lexically_relative(owner->dir);
    const std::string rel_str = rel.generic_string();
    const std::string folder = rel.parent_path().generic_string();
    const std::string ext = rel.extension().string();
    const std::string stem = rel.stem().string();
    Package& p = owner->package;

    if (owner->manifest.is_metapackage) {
      if (rel_str != "package.xml" && rel_str != "CMakeLists.txt") {
        owner->meta_files.push_back(rel_str);
      }
      continue;
    }
    if (folder == "msg" && ext == ".msg") {
      p.msg_data.push_back(stem);
    } else if (folder == "srv" && ext == ".srv") {
      p.srv_data.push_back(stem);
    } else if (folder == "action" && ext == ".action") {
      auto text = read_file(file);
      if (text && split_action_file(*text)) {
        p.action_data.push_back(stem);
      } else {
        report(Severity::Warning, file,
               "action definition does not have three '---' separated sections");
        p.misc.push_back(rel_str);
      }
    } else {
      p.misc.push_back(rel_str);
      if (rel_str == "meros.map") {
        std::istringstream in(read_file(file).value_or(""));
        std::string line;
        while (std::getline(in, line)) {
          line = trim(line);
          if (line.empty() || line.front() == '#') continue;
          std::istringstream words(line);
          std::string kind, name;
          words >> kind;
          std::getline(words, name);
          name = trim(name);
          std::vector<std::string>* list = kind == "node"      ? &p.nodes
                                           : kind == "nodelet" ? &p.nodelets
                                           : kind == "plugin"  ? &p.plugins
                                           : kind == "library" ? &p.libraries
                                                               : nullptr;
          if (!list || name.empty()) {
            report(Severity::Warning, file, "ignoring line '" + line + "'");
            continue;
          }
          list->push_back(name);
        }
      }
    }
  }

  if (failed) return result;

  Workspace workspace;
  fs::path absolute = fs::weakly_canonical(root, ec);
  workspace.name = (ec ? root : absolute).filename().string();
  if (workspace.name.empty()) workspace.name = "workspace";
  for (auto& [dir, draft] : drafts) {
    if (draft.manifest.is_metapackage) {
      Metapackage meta;
      meta.name = draft.manifest.name;
      meta.packages = draft.manifest.dependencies;
      meta.misc = std::move(draft.meta_files);
      workspace.metapackages.push_back(std::move(meta));
    } else {
      Package p = std::move(draft.package);
      for (auto* list : {&p.nodes, &p.nodelets, &p.plugins, &p.libraries,
                         &p.msg_data, &p.srv_data, &p.action_data, &p.misc}) {
        std::sort(list->begin(), list->end());
        list->erase(std::unique(list->begin(), list->end()), list->end());
      }
      workspace.packages.push_back(std::move(p));
    }
  }
  auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
  std::sort(workspace.packages.begin(), workspace.packages.end(), by_name);
  std::sort(workspace.metapackages.begin(), workspace.metapackages.end(), by_name);
  result.workspace = std::move(workspace);
  return result;
}

}  // namespace meros
