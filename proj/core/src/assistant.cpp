#include "wrangle/assistant.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle {

InteractionSet::InteractionSet(std::vector<Constraint> constraints) {
  for (auto& c : constraints) {
    if (!contains(c)) constraints_.push_back(std::move(c));
  }
}

bool InteractionSet::contains(std::string_view constraint) const {
  return std::find(constraints_.begin(), constraints_.end(), constraint) != constraints_.end();
}

InteractionSet InteractionSet::with(Constraint constraint) const {
  InteractionSet out = *this;
  if (!out.contains(constraint)) out.constraints_.push_back(std::move(constraint));
  return out;
}

bool InteractionSet::extends_by_one(const InteractionSet& base) const {
  if (size() != base.size() + 1) return false;
  return std::equal(base.constraints_.begin(), base.constraints_.end(), constraints_.begin());
}

std::string InteractionSet::encode() const { return join_constraints(constraints_); }

InteractionSet InteractionSet::decode(std::string_view line) {
  return InteractionSet(split_constraints(line));
}

std::string Expression::script_text() const {
  std::string out;
  for (const auto& line : script) {
    out += line;
    out += '\n';
  }
  return out;
}

void Bindings::set(const std::string& slot, std::string path) {
  for (auto& [key, value] : entries_) {
    if (key == slot) {
      value = std::move(path);
      return;
    }
  }
  entries_.emplace_back(slot, std::move(path));
}

std::optional<std::string> Bindings::find(std::string_view slot) const {
  for (const auto& [key, value] : entries_)
    if (key == slot) return value;
  return std::nullopt;
}

const std::string& Bindings::at(std::string_view slot) const {
  for (const auto& [key, value] : entries_)
    if (key == slot) return value;
  throw Error(ErrorCode::missing_binding, "no dataset bound to '" + std::string(slot) + "'");
}

Preview BoundAssistant::preview(const Expression&, const Table& output, std::size_t rows) const {
  return wrangle::preview(output, rows);
}

InteractionSet BoundAssistant::canonical(const InteractionSet& h) const {
  std::vector<Constraint> out;
  for (const auto& c : h.constraints()) out.push_back(canonical_constraint(c));
  return InteractionSet(std::move(out));
}

void Registry::add(std::shared_ptr<const Assistant> assistant) {
  if (contains(assistant->descriptor().id))
    throw Error(ErrorCode::invalid_argument,
                "assistant '" + assistant->descriptor().id + "' registered twice");
  assistants_.push_back(std::move(assistant));
}

const Assistant& Registry::find(std::string_view id) const {
  for (const auto& a : assistants_)
    if (a->descriptor().id == id) return *a;
  throw Error(ErrorCode::unknown_assistant, "unknown assistant '" + std::string(id) + "'");
}

bool Registry::contains(std::string_view id) const {
  return std::any_of(assistants_.begin(), assistants_.end(),
                     [&](const auto& a) { return a->descriptor().id == id; });
}

std::vector<AssistantDescriptor> Registry::list() const {
  std::vector<AssistantDescriptor> out;
  for (const auto& a : assistants_) out.push_back(a->descriptor());
  return out;
}

void check_bindings(const AssistantDescriptor& descriptor, const Bindings& bindings) {
  for (const auto& slot : descriptor.input_slots) {
    auto path = bindings.find(slot);
    if (!path)
      throw Error(ErrorCode::missing_binding,
                  descriptor.id + " needs a dataset bound to '" + slot + "'");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(*path, ec))
      throw Error(ErrorCode::io_error, "cannot read " + *path);
  }
}

std::string_view to_string(SessionStatus status) {
  return status == SessionStatus::active ? "active" : "accepted";
}

Session::Session(std::string session_id, const Assistant& assistant, Bindings bindings,
                 Options options)
    : id_(std::move(session_id)),
      descriptor_(assistant.descriptor()),
      bindings_(std::move(bindings)),
      options_(std::move(options)) {
  check_bindings(descriptor_, bindings_);
  bound_ = assistant.bind(bindings_, options_);
  auto rows = options_.get_int("preview_rows", 10);
  if (rows < 0) throw Error(ErrorCode::invalid_argument, "preview_rows must be non-negative");
  preview_rows_ = static_cast<std::size_t>(rows);
}

void Session::ensure_active() const {
  if (status_ != SessionStatus::active)
    throw Error(ErrorCode::session_closed, "session " + id_ + " is already accepted");
}

const Recommendation& Session::step() {
  if (last_) return *last_;
  ensure_active();
  Recommendation rec;
  rec.expression = bound_->best(current_);
  Table output = bound_->apply(rec.expression);
  rec.preview = bound_->preview(rec.expression, output, preview_rows_);
  rec.choices = bound_->choices(current_);
  last_ = std::move(rec);
  ++revision_;
  return *last_;
}

void Session::select(std::size_t index, std::optional<std::uint64_t> expected_revision) {
  ensure_active();
  if (!last_ || (expected_revision && *expected_revision != revision_))
    throw Error(ErrorCode::stale_choice, "choice does not refer to the current recommendation");
  if (index >= last_->choices.size())
    throw Error(ErrorCode::out_of_range, "choice " + std::to_string(index) + " of " +
                                             std::to_string(last_->choices.size()));
  InteractionSet next = last_->choices[index].next;
  for (const auto& c : next.constraints()) {
    if (!current_.contains(c)) history_.push_back(c);
  }
  current_ = std::move(next);
  last_.reset();
}

void Session::select_constraint(std::string_view constraint) {
  ensure_active();
  Constraint canonical = bound_->canonical_constraint(constraint);
  if (current_.contains(canonical)) return;
  current_ = current_.with(canonical);
  history_.push_back(std::move(canonical));
  last_.reset();
}

FinalResult Session::accept() {
  ensure_active();
  if (!last_) throw Error(ErrorCode::no_recommendation, "nothing to accept; call step first");
  FinalResult result;
  result.expression = last_->expression;
  result.output = bound_->apply(result.expression);
  result.script_text = result.expression.script_text();
  result_ = result;
  status_ = SessionStatus::accepted;
  return result;
}

std::size_t select_column(const Table& table, const Options& options) {
  if (table.n_columns() == 0) throw Error(ErrorCode::invalid_argument, "table has no columns");
  auto wanted = options.get("column");
  if (!wanted) return 0;
  if (auto i = table.find(*wanted)) return *i;
  std::size_t index = 0;
  auto [ptr, ec] = std::from_chars(wanted->data(), wanted->data() + wanted->size(), index);
  if (ec == std::errc{} && ptr == wanted->data() + wanted->size() && index >= 1 &&
      index <= table.n_columns())
    return index - 1;
  throw Error(ErrorCode::invalid_argument, "no column '" + *wanted + "'");
}

Choice extend(const InteractionSet& h, Constraint constraint, std::string label) {
  return Choice{std::move(label), h.with(std::move(constraint))};
}

}  // namespace wrangle
