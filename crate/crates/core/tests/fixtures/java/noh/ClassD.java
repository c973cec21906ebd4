package test.noh;

public class ClassD {
    public void touch() {
    }
}
