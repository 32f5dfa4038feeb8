#include "wrangle/registry.hpp"

#include "wrangle/datadiff.hpp"
#include "wrangle/dialect.hpp"
#include "wrangle/outlier.hpp"
#include "wrangle/semantic.hpp"
#include "wrangle/typeinfer.hpp"

namespace wrangle {

Registry default_registry() {
  Registry r;
  r.add(std::make_shared<datadiff::DatadiffAssistant>());
  r.add(std::make_shared<dialect::DialectAssistant>());
  r.add(std::make_shared<ptype::TypeInferAssistant>());
  r.add(std::make_shared<semantic::SemanticAssistant>());
  r.add(std::make_shared<outlier::OutlierAssistant>());
  r.add(std::make_shared<outlier::AggregatesAssistant>());
  return r;
}

}  // namespace wrangle
