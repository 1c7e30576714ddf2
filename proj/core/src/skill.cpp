// SPDX-License-Identifier: Apache-2.0
#include "harness/skill.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace harness {

std::string to_string(MetaOrigin origin) {
    switch (origin) {
        case MetaOrigin::toml: return "toml";
        case MetaOrigin::front_matter: return "front_matter";
        case MetaOrigin::docstring: return "docstring";
        case MetaOrigin::folder_name: return "folder_name";
    }
    return "unknown";
}

SkillMetadata merge_metadata(const std::vector<MetadataSource>& sources) {
    if (sources.empty()) {
        throw std::invalid_argument("merge_metadata: sources must be non-empty");
    }
    std::set<MetaOrigin> seen;
    for (const auto& s : sources) {
        if (!seen.insert(s.origin).second) {
            throw std::invalid_argument("merge_metadata: duplicate origin '" +
                                        to_string(s.origin) + "'");
        }
    }
    std::vector<const MetadataSource*> ranked;
    ranked.reserve(sources.size());
    for (const auto& s : sources) ranked.push_back(&s);
    std::sort(ranked.begin(), ranked.end(), [](const auto* a, const auto* b) {
        return static_cast<int>(a->origin) < static_cast<int>(b->origin);
    });

    SkillMetadata meta;
    bool desc_set = false, tags_set = false, mcp_set = false, timeout_set = false;
    for (const auto* s : ranked) {
        if (!desc_set && s->description) {
            meta.description = *s->description;
            desc_set = true;
        }
        if (!tags_set && s->tags) {
            meta.tags = *s->tags;
            tags_set = true;
        }
        if (!mcp_set && s->is_mcp) {
            meta.is_mcp = *s->is_mcp;
            mcp_set = true;
        }
        if (!timeout_set && s->timeout_secs) {
            meta.timeout_secs = *s->timeout_secs;
            timeout_set = true;
        }
    }
    if (meta.timeout_secs <= 0) {
        throw std::invalid_argument("merge_metadata: timeout_secs must be positive");
    }
    for (const auto& tag : meta.tags) {
        if (tag.empty()) throw std::invalid_argument("merge_metadata: empty tag");
    }
    return meta;
}

bool is_streaming(const HandlerBinding& binding) {
    switch (binding.kind) {
        case BindingKind::in_process_unary: return false;
        case BindingKind::in_process_streaming: return true;
        case BindingKind::subprocess: return binding.command_streaming;
    }
    return false;
}

bool is_streaming(const Skill& skill) { return is_streaming(skill.binding); }

HandlerBinding Skill::effective_binding() const {
    std::lock_guard lock(edit_mu_);
    return edit_ ? *edit_ : binding;
}

bool Skill::has_edit_binding() const {
    std::lock_guard lock(edit_mu_);
    return edit_ != nullptr;
}

void Skill::set_edit_binding(HandlerBinding b) {
    auto next = std::make_shared<const HandlerBinding>(std::move(b));
    std::lock_guard lock(edit_mu_);
    edit_ = std::move(next);
}

void Skill::clear_edit_binding() {
    std::lock_guard lock(edit_mu_);
    edit_.reset();
}

bool is_valid_skill_name(const std::string& name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

}  // namespace harness
