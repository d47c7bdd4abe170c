// Shared verbatim test documents (capability registration, discovery need,
// flight segment translation pair).
#pragma once

namespace modx::test {

inline const char* kFlightAgentAidl = R"({
  "agentId": "flight-agent-001",
  "capabilities": [{
    "name": "flightBooking",
    "version": "1.2.0",
    "semantics": {
      "ontology": "http://schema.org/Flight",
      "embedding": [0.2, 0.8, 0.1, 0.7],
      "operations": ["search", "price", "book", "cancel"]
    },
    "interface": {
      "inputs": {
        "search": {
          "origin": "string",
          "destination": "string",
          "departureDate": "date",
          "returnDate": "date?",
          "passengers": "integer",
          "class": "string?"
        },
        "book": {
          "flightId": "string",
          "passengers": "array<object>",
          "paymentMethod": "object"
        }
      },
      "outputs": {
        "search": "array<object>",
        "book": "object"
      }
    }
  }]
})";

inline const char* kAirlineFlightDoc = R"({
  "flightOptions": [{
    "carrier": "ANA",
    "flightNo": "NH007",
    "departure": {
      "airport": "SFO",
      "time": "2025-06-10T10:30Z"
    },
    "arrival": {
      "airport": "NRT",
      "time": "2025-06-11T14:25Z"
    },
    "price": 1650,
    "class": "business"
  }]
})";

inline const char* kTravelSegmentDoc = R"({
  "travelSegments": [{
    "type": "flight",
    "provider": "ANA",
    "identifier": "NH007",
    "origin": {
      "location": "San Francisco",
      "departure": "2025-06-10T10:30Z"
    },
    "destination": {
      "location": "Tokyo",
      "arrival": "2025-06-11T14:25Z"
    },
    "cost": 1650,
    "category": "premium"
  }]
})";

}  // namespace modx::test
