# Transform Module
