package test.suite;

public class RFCCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
