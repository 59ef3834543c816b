# linquench tests
